"""
Long-time energy behaviour.

The discrete energy (rectangle rule, spectral x-derivative, centred time
derivative) is sampled along a t = 200 run of the c = 0.4 soliton with
h = 1/4 and tau = 0.02.  It stays within about one part in a million.

Run:  python3 demos/02_energy_conservation.py
"""

from ckg.studies import accuracy_base, energy_study

cfg = accuracy_base(h=0.25, tau=0.02, t_final=200.0)
samples = energy_study(cfg, times=[25, 50, 75, 100, 125, 150, 175, 200])
E0 = samples[0].E
print(f"E(0) = {E0:.10f}")
for s in samples[1:]:
    print(f"E({s.t:5.0f}) = {s.E:.10f}   relative change {(s.E - E0) / E0:+.2e}")
