"""
Noise robustness and key sensitivity
====================================

Add Gaussian noise to a ciphertext before decrypting, then decrypt with a
slightly wrong map coefficient.
"""

import hashlib

from chaoscipher import ChaoticKey
from chaoscipher.analysis import key_sensitivity_experiment, noise_robustness_experiment
from chaoscipher.samples import load_sample

key = ChaoticKey(hashlib.sha256(b"demo").hexdigest())
img = load_sample("coffee")

# %%
# Each byte is decrypted independently, so channel noise stays local and
# roughly keeps its size (the XOR stage can amplify it a bit).
report = noise_robustness_experiment(img, key, "3d", variances=(0, 10, 100, 1000), rng_seed=1)
print(report.to_text())
print("random-guess baseline MSE:", round(report.scalars["random_baseline_mse"], 1))

# %%
# Shift one map coefficient by 0.01 and decrypt. The orbit diverges from the
# true one within a few dozen steps, so almost every byte is wrong.
for coeff in ("a1", "b2"):
    rep = key_sensitivity_experiment(img, key, "3d", perturbation=0.01, coefficient=coeff)
    print(f"shift {coeff}:")
    print(rep.rows_csv())

rgb = load_sample("rocket", color=True)
print(key_sensitivity_experiment(rgb, key, "2d").rows_csv())
