"""Precompute the expensive acceptance-suite results into tests/_artifacts.

Usage:
    python tests/warm_cache.py               # everything
    python tests/warm_cache.py t330 scans    # selected stages

Running this is optional; the acceptance tests compute anything missing on
their own.  Warming the cache first just gives progress output and lets the
stages run while you work on something else.
"""
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import acceptance_lib as lib  # noqa: E402


def main(stages):
    cache = lib.ResultCache()
    t0 = time.time()

    def log(msg):
        print(f"[{(time.time() - t0) / 60:6.1f} min] {msg}", flush=True)

    if "t330" in stages:
        for g_max in (4.0, 2.0, 1.0):
            pulse = lib.t330_pulse(cache, g_max)
            log(f"t330 g_max={g_max:g}: F={pulse['fidelity']:.5f} "
                f"({pulse['termination']}, {pulse['iterations']} iterations)")
    if "scans" in stages:
        for g_max in (4.0, 2.0, 1.0):
            scan = lib.threshold_scan(cache, g_max)
            log(f"scan g_max={g_max:g}: T_th={scan['t_threshold']}"
                f" ({'' if scan['found'] else 'NOT '}found), scan={scan['scan']}")
    if "noise" in stages:
        for g_max in (4.0, 2.0, 1.0):
            scan = lib.threshold_scan(cache, g_max)
            study = lib.noise_study(cache, g_max, scan)
            log(f"noise g_max={g_max:g}: {study['points']}")
    if "lindblad" in stages:
        for g_max in (4.0, 2.0, 1.0):
            pulse = lib.t330_pulse(cache, g_max)
            pair = lib.lindblad_pair(cache, g_max, pulse)
            log(f"lindblad g_max={g_max:g}: closed={pair['closed']:.5f} "
                f"open={pair['open']:.5f} drop={pair['drop']:.5f}")
        zero = lib.lindblad_zero_rate(cache, lib.t330_pulse(cache, 2.0))
        log(f"lindblad zero-rate difference: {zero['difference']:.2e}")
    log("done")


if __name__ == "__main__":
    stages = sys.argv[1:] or ["t330", "scans", "noise", "lindblad"]
    main(stages)
