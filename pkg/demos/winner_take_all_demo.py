"""Winner-take-all inhibition on a two-neuron network.

Neuron 0 gets a stronger synapse column, spikes first, and its inhibition
keeps neuron 1 silent for t_inh after every spike.
"""
import numpy as np

from spikecross import CrossbarState, Image, Network, NetworkConfig

config = NetworkConfig(n_neurons=2, seed=3, t_inh=40.0, t_learn=300.0)
g = np.full((784, 2), 0.5)
g[:, 0] = 0.8                       # neuron 0 is the stronger responder
net = Network(config, crossbar=CrossbarState(g, 0.0, 1.0, 0.0))

image = Image(np.full((28, 28), 200, dtype=np.uint8))
raster = []
net.present_image(image, learning=False, spike_raster=raster)

events = [(t, m) for t, layer, m in raster if layer == "spiking"]
print("t_ms  neuron")
for t, m in events:
    print(f"{t:5.0f}  {m}")

t0 = [t for t, m in events if m == 0]
t1 = [t for t, m in events if m == 1]
print(f"\nneuron 0 spiked {len(t0)}x, neuron 1 spiked {len(t1)}x")
if t1:
    closest = min(t_b - t_a for t_b in t1 for t_a in t0 if t_b > t_a)
    print(f"closest neuron-1 spike after a neuron-0 spike: {closest:.0f} ms "
          f"(never below t_inh = {config.t_inh:.0f} ms)")
else:
    print("neuron 1 was fully suppressed for the whole presentation")
