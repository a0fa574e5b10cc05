"""Print the update-magnitude and gating-probability curves as CSV.

Shows the soft-bound magnitudes over the conductance range, then the
potentiation/depression probabilities for weak, middle, and strong inputs.
The frequency-dependent mode widens the window of high-rate inputs, so a
weak input's spike must land closer to the postsynaptic spike to count.
"""
import numpy as np

from spikecross import RuleMode, StdpParams, StochParams, delta_g_dep, delta_g_pot, p_dep, p_pot

stdp = StdpParams()
stoch = StochParams()

print("# update magnitudes")
print("g,delta_pot,delta_dep")
for g in np.linspace(0.0, 1.0, 11):
    print(f"{g:.1f},{delta_g_pot(g, stdp):.6f},{delta_g_dep(g, stdp):.6f}")

print("\n# potentiation probability vs lag (stochastic vs frequency-dependent)")
print("lag_ms,stochastic,fd_5hz,fd_13.5hz,fd_22hz")
for lag in (0, 10, 20, 40, 80, 160):
    row = [p_pot(lag, 13.5, RuleMode.STOCHASTIC, stoch)]
    row += [p_pot(lag, f, RuleMode.FD_STOCHASTIC, stoch) for f in (5.0, 13.5, 22.0)]
    print(f"{lag}," + ",".join(f"{p:.6f}" for p in row))

print("\n# depression probability vs lag")
print("lag_ms,stochastic,fd_5hz,fd_13.5hz,fd_22hz")
for lag in (0, -2, -5, -10, -20):
    row = [p_dep(lag, 13.5, RuleMode.STOCHASTIC, stoch)]
    row += [p_dep(lag, f, RuleMode.FD_STOCHASTIC, stoch) for f in (5.0, 13.5, 22.0)]
    print(f"{lag}," + ",".join(f"{p:.6f}" for p in row))

print("\nat f_min the fd curves coincide with the plain stochastic ones exactly:",
      p_pot(40.0, 5.0, RuleMode.FD_STOCHASTIC, stoch)
      == p_pot(40.0, 5.0, RuleMode.STOCHASTIC, stoch))
