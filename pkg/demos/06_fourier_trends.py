"""
A-norm estimates from truncated FFTs
====================================

The estimate of ||g||_1 from a truncation to [-R, R) is trend evidence only.
"""

from wienercert.fourier import a_norm_trend, n_for_spacing, truncated_fourier_l1
from wienercert.gallery import gallery

print(truncated_fourier_l1(gallery("gaussian"), 8, 4096))
print(truncated_fourier_l1(gallery("hat"), 4, 4096))

# %%
# For m with alpha = 2 the truncated norm grows like R^(1 - beta) when beta < 1,
# and converges like L - c R^(1 - beta) when beta > 1; the latter is slow.
# Stationary frequencies reach 2R, so the spacing must keep pi/spacing above 2R:
# at spacing 2^-6 the ladder aliases from R ~ 100 on and flattens falsely.
for beta in ("0.8", "1.2"):
    t = a_norm_trend(gallery(f"m:alpha=2,beta={beta}"), [16, 32, 64, 128], 2.0**-6)
    print(beta, t.classification, round(t.slope, 3), [round(e.l1, 3) for e in t.entries])

for beta in ("0.8", "1.2"):
    t = a_norm_trend(gallery(f"m:alpha=2,beta={beta}"), [64, 128, 256, 512], lambda R: n_for_spacing(R, 1 / (2 * R)))
    print(beta, "resolved:", t.classification, round(t.slope, 3), [round(e.l1, 3) for e in t.entries])
