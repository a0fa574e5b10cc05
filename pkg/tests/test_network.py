"""Simulation loop: winner-take-all inhibition, learning orchestration, determinism."""
import numpy as np
import pytest

from spikecross import (ConfigurationError, CrossbarState, Image, ImageSet, Network,
                        NetworkConfig, NoiseSpec, RuleMode)


def _image(rng=None, blank=False):
    if blank:
        return Image(np.zeros((28, 28), np.uint8), 0)
    return Image((rng or np.random.default_rng(0)).integers(0, 256, (28, 28), np.uint8), 5)


def test_blank_image_smoke():
    net = Network(NetworkConfig(n_neurons=10, seed=3))
    result = net.present_image(_image(blank=True), learning=True)
    assert result.spike_counts.min() >= 0
    assert net.crossbar.g.min() >= 0.0 and net.crossbar.g.max() <= 1.0


def test_inference_leaves_crossbar_untouched(rng):
    net = Network(NetworkConfig(n_neurons=20, seed=3))
    before = net.crossbar.g.copy()
    result = net.present_image(_image(rng), learning=False)
    assert result.update_count == 0
    assert np.array_equal(net.crossbar.g, before)


def test_learning_updates_and_stays_bounded(rng):
    net = Network(NetworkConfig(n_neurons=20, seed=3))
    result = net.present_image(_image(rng), learning=True)
    if result.spike_counts.sum() > 0:
        assert result.update_count > 0
    assert net.crossbar.g.min() >= 0.0 and net.crossbar.g.max() <= 1.0


def test_two_neurons_suppression_window():
    # one neuron is given a stronger column, spikes first, and the other
    # cannot spike within t_inh of that first spike
    config = NetworkConfig(n_neurons=2, seed=9, t_inh=40.0, t_learn=300.0)
    g = np.full((784, 2), 0.5)
    g[:, 0] = 0.8
    net = Network(config, crossbar=CrossbarState(g, 0.0, 1.0, 0.0))
    raster = []
    net.present_image(_image(), learning=False, spike_raster=raster)
    events = [(t, m) for t, layer, m in raster if layer == "spiking"]
    assert events, "no spikes at all"
    assert events[0][1] == 0
    by_neuron = {0: [t for t, m in events if m == 0], 1: [t for t, m in events if m == 1]}
    for t1 in by_neuron[1]:
        for t0 in by_neuron[0]:
            if t1 > t0:
                assert t1 - t0 >= config.t_inh


def test_wta_exclusivity_full_trace(small_corpus):
    config = NetworkConfig(n_neurons=30, seed=5, t_inh=30.0)
    net = Network(config)
    for idx in range(10):
        raster = []
        net.present_image(small_corpus[idx], learning=True, spike_raster=raster)
        events = [(t, m) for t, layer, m in raster if layer == "spiking"]
        for i, (t1, m1) in enumerate(events):
            for t0, m0 in events[:i]:
                if m0 != m1 and t1 > t0:
                    assert t1 - t0 >= config.t_inh


def test_one_inhibitory_event_per_spike(small_corpus):
    # the inhibition layer is a pure relay: every second-layer spike is a
    # single inhibition event, visible as the suppression of all peers
    config = NetworkConfig(n_neurons=8, seed=5)
    net = Network(config)
    raster = []
    net.present_image(small_corpus[0], learning=False, spike_raster=raster)
    spikes = [(t, m) for t, layer, m in raster if layer == "spiking"]
    # at most one accepted spike per time step under arbitration
    times = [t for t, _ in spikes]
    assert len(times) == len(set(times))


def test_membrane_reset_between_images(small_corpus):
    # identical consecutive presentations of the same image with the same
    # phase stream would diverge if state leaked across presentations
    config = NetworkConfig(n_neurons=12, seed=5)
    net_a = Network(config)
    img = small_corpus[1]
    ra = net_a.present_image(img, learning=False,
                             encoding_rng=np.random.default_rng(3),
                             noise_rng=np.random.default_rng(4))
    rb = net_a.present_image(img, learning=False,
                             encoding_rng=np.random.default_rng(3),
                             noise_rng=np.random.default_rng(4))
    assert np.array_equal(ra.spike_counts, rb.spike_counts)


def test_training_deterministic_given_seed(small_corpus):
    subset = small_corpus.head(30)
    config = NetworkConfig(n_neurons=15, seed=21, rule=RuleMode.DETERMINISTIC)
    net_a, net_b = Network(config), Network(config)
    net_a.train(subset)
    net_b.train(subset)
    assert np.array_equal(net_a.crossbar.g, net_b.crossbar.g)


def test_stochastic_training_deterministic_given_seed(small_corpus):
    subset = small_corpus.head(20)
    config = NetworkConfig(n_neurons=15, seed=21, rule=RuleMode.FD_STOCHASTIC,
                           gamma_dv=0.08)
    net_a, net_b = Network(config), Network(config)
    net_a.train(subset, noise=NoiseSpec("awgn", 5.0))
    net_b.train(subset, noise=NoiseSpec("awgn", 5.0))
    assert np.array_equal(net_a.crossbar.g, net_b.crossbar.g)


def test_train_counts_and_stats(small_corpus):
    subset = small_corpus.head(25)
    net = Network(NetworkConfig(n_neurons=10, seed=2))
    stats = net.train(subset, epochs=2)
    assert stats.presentations == 50
    assert stats.spikes_by_class.shape == (10, 10)
    counts, edges = stats.conductance_histogram
    assert counts.sum() == 784 * 10
    assert len(edges) == len(counts) + 1
    with pytest.raises(ConfigurationError):
        net.train(subset, epochs=0)


def test_epoch_redraws_noise(small_corpus):
    # the noise stream advances across presentations, so two epochs see
    # different corruptions of the same image
    subset = small_corpus.head(1)
    net = Network(NetworkConfig(n_neurons=5, seed=2))
    spec = NoiseSpec("awgn", 5.0)
    from spikecross import apply_noise
    a = apply_noise(subset[0], spec, net.rng_noise)
    b = apply_noise(subset[0], spec, net.rng_noise)
    assert not np.array_equal(a.pixels, b.pixels)


def test_raster_csv_format(small_corpus):
    from spikecross import raster_csv
    net = Network(NetworkConfig(n_neurons=10, seed=2))
    raster = []
    net.present_image(small_corpus[0], learning=False, spike_raster=raster)
    text = raster_csv(raster)
    lines = text.strip().split("\n")
    assert lines[0] == "t,layer,neuron"
    assert len(lines) == len(raster) + 1
    layers = {line.split(",")[1] for line in lines[1:]}
    assert layers <= {"input", "spiking"}
    assert "input" in layers


def test_update_log_records_writes(small_corpus):
    net = Network(NetworkConfig(n_neurons=10, seed=2))
    log = []
    result = net.present_image(small_corpus[2], learning=True, update_log=log)
    assert len(log) == result.update_count
    for t, neuron, synapse, kind, delta, g_after in log[:20]:
        assert kind in ("LTP", "LTD")
        assert 0 <= g_after <= 1.0


def test_device_variation_training_stays_bounded(small_corpus):
    net_dv = Network(NetworkConfig(n_neurons=10, seed=2, gamma_dv=0.08))
    net_dv.train(small_corpus.head(10))
    assert net_dv.crossbar.g.min() >= 0.0
    assert net_dv.crossbar.g.max() <= 1.0
