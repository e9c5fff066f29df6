#!/usr/bin/env python3
"""Solve the case-study profile parameters and pick the default seed.

The built-in profiles use constant pulse power and grid-snapped
durations, and the case-study config puts the ON threshold at half the
pulse power. Under those conditions the pipeline recovers each
generated duration exactly and each energy as p * (d - q/4) / 60 kWh
(q = sample period in minutes, the ramp deficit of the trapezoidal
model). That makes the fit algebraic:

  * cleaning: solve the short/long mixture weights and the long-arm
    center so the recovered energy mean/sd land on 2.43 / 2.89 kWh with
    max near 7.5 kWh;
  * shot peening: slide the out-of-band arm so the recovered mean
    duration is 13.0 min, then set power for sd(energy) = 0.87 kWh;
  * trowalising 370: slide the main arm for mean duration 50.0 min;
  * trowalising 510: solve the above-ideal arm weight for mean 130.0.

All moments are computed on the *quantized* laws (values snapped to the
sampling grid). A final search picks a seed whose realized sample
statistics sit well inside every tolerance window, and the result is
verified through the real pipeline. The solved numbers are frozen into
loadaudit.synth.
"""

from __future__ import annotations

import math
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

import loadaudit as la  # noqa: E402


def quantized_uniform(lo: float, hi: float, q: float) -> dict[float, float]:
    """Probability mass of Uniform(lo, hi) after snapping to multiples of q."""
    out: dict[float, float] = {}
    k_lo = math.floor(lo / q + 0.5)
    k_hi = math.floor(hi / q + 0.5)
    for k in range(k_lo, k_hi + 1):
        a = max(lo, (k - 0.5) * q)
        b = min(hi, (k + 0.5) * q)
        if b > a:
            out[max(1, k) * q] = (b - a) / (hi - lo)
    return out


def moments(pmf: dict[float, float]) -> tuple[float, float]:
    m1 = sum(v * p for v, p in pmf.items())
    m2 = sum(v * v * p for v, p in pmf.items())
    return m1, m2


def mix_moments(arms: list[tuple[dict[float, float], float]]) -> tuple[float, float]:
    m1 = sum(w * moments(pmf)[0] for pmf, w in arms)
    m2 = sum(w * moments(pmf)[1] for pmf, w in arms)
    return m1, m2


def fit_cleaning():
    q = 1.0
    p_kw = 9.6
    w_band = 37 / 645
    mu_d = 2.43 * 60 / p_kw + q / 4          # recovered mean energy -> duration mean
    sd_d = 2.89 * 60 / p_kw                  # recovered sd energy -> duration sd
    e2_target = sd_d**2 + mu_d**2

    short = quantized_uniform(1.6, 5.4, q)
    band = quantized_uniform(13.6, 17.4, q)
    m1_s, m2_s = moments(short)
    m1_b, m2_b = moments(band)
    w_rest = 1.0 - w_band

    def solve(center: float):
        long = quantized_uniform(center - 3.0, center + 3.0, q)
        m1_l, m2_l = moments(long)
        w_long = (mu_d - m1_s * w_rest - m1_b * w_band) / (m1_l - m1_s)
        w_short = w_rest - w_long
        e2 = m2_s * w_short + m2_b * w_band + m2_l * w_long
        return w_short, w_long, e2

    lo, hi = 36.0, 56.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        _, _, e2 = solve(mid)
        if e2 < e2_target:
            lo = mid
        else:
            hi = mid
    center = 0.5 * (lo + hi)
    w_short, w_long, e2 = solve(center)
    max_d = max(quantized_uniform(center - 3.0, center + 3.0, q))
    print(f"cleaning: power={p_kw} center={center:.4f} w_short={w_short:.6f} "
          f"w_long={w_long:.6f} (w_band={w_band:.6f})")
    print(f"  duration mean={mu_d:.4f} sd={math.sqrt(e2 - mu_d**2):.4f} "
          f"-> energy mean={p_kw*(mu_d - q/4)/60:.4f} sd={p_kw*math.sqrt(e2-mu_d**2)/60:.4f} "
          f"max={p_kw*(max_d - q/4)/60:.4f}")
    return center, w_long, p_kw


def fit_shot_peening():
    q = 0.25
    w_band = 2738 / 4589
    band = quantized_uniform(13.4, 17.2, q)
    m1_b, _ = moments(band)
    w_out = 1.0 - w_band
    target_out_mean = (13.0 - w_band * m1_b) / w_out

    half = 3.1

    def out_mean(center: float) -> float:
        return moments(quantized_uniform(center - half, center + half, q))[0]

    lo, hi = 4.0 + half, 12.8 - half
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if out_mean(mid) < target_out_mean:
            lo = mid
        else:
            hi = mid
    center = 0.5 * (lo + hi)
    out = quantized_uniform(center - half, center + half, q)
    m1, m2 = mix_moments([(out, w_out), (band, w_band)])
    sd_d = math.sqrt(m2 - m1 * m1)
    p_kw = round(0.87 * 60 / sd_d, 1)
    print(f"shot_peening: center={center:.4f} arm=({center-half:.4f},{center+half:.4f}) "
          f"power={p_kw}")
    print(f"  duration mean={m1:.4f} sd={sd_d:.4f} -> sd energy={p_kw*sd_d/60:.4f}")
    return center - half, center + half, p_kw


def fit_trowalising_370():
    q = 1.0
    w_band = 5 / 1526
    band = quantized_uniform(151.6, 154.4, q)
    m1_b, _ = moments(band)
    w_main = 1.0 - w_band
    target = (50.0 - w_band * m1_b) / w_main
    half = 17.35

    def main_mean(center: float) -> float:
        return moments(quantized_uniform(center - half, center + half, q))[0]

    lo, hi = 20.0 + half, 100.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if main_mean(mid) < target:
            lo = mid
        else:
            hi = mid
    center = 0.5 * (lo + hi)
    print(f"trowalising_370: main arm=({center-half:.4f},{center+half:.4f})")
    m1, m2 = mix_moments(
        [(quantized_uniform(center - half, center + half, q), w_main), (band, w_band)]
    )
    print(f"  duration mean={m1:.4f} sd={math.sqrt(m2-m1*m1):.4f}")
    return center - half, center + half


def fit_trowalising_510():
    q = 1.0
    w_band = 8 / 1199
    low = quantized_uniform(100.4, 147.6, q)
    band = quantized_uniform(151.6, 154.4, q)
    high = quantized_uniform(156.6, 175.4, q)
    m1_low, _ = moments(low)
    m1_band, _ = moments(band)
    m1_high, _ = moments(high)
    w_rest = 1.0 - w_band
    # mean = m1_low*(w_rest - w_high) + m1_band*w_band + m1_high*w_high = 130
    w_high = (130.0 - m1_low * w_rest - m1_band * w_band) / (m1_high - m1_low)
    w_low = w_rest - w_high
    m1, m2 = mix_moments([(low, w_low), (band, w_band), (high, w_high)])
    print(f"trowalising_510: w_high={w_high:.6f} w_low={w_low:.6f}")
    print(f"  duration mean={m1:.4f} sd={math.sqrt(m2-m1*m1):.4f}")
    return w_high


def realized_stats(profile: la.CycleProfile, seed: int, power: float):
    """Recovered stats implied by the ground truth (exact under the
    half-power threshold: durations recover exactly, energies as
    p*(d - q/4)/60)."""
    _, truth = la.generate_series(profile, seed)
    q_min = profile.sample_period_s / 60.0
    d = [c.duration_min for c in truth.cycles]
    e = [power * (x - q_min / 4.0) / 60.0 for x in d]
    n = len(d)
    mean_d = sum(d) / n
    sd_d = math.sqrt(sum((x - mean_d) ** 2 for x in d) / n)
    mean_e = sum(e) / n
    sd_e = math.sqrt(sum((x - mean_e) ** 2 for x in e) / n)
    return {
        "n": n,
        "mean_d": mean_d,
        "sd_d": sd_d,
        "mean_e": mean_e,
        "sd_e": sd_e,
        "max_e": max(e),
        "in_band_13_18": sum(13.0 <= x <= 18.0 for x in d),
        "in_band_151_155": sum(151.0 <= x <= 155.0 for x in d),
    }


def seed_ok(stats: dict[str, dict]) -> bool:
    c = stats["cleaning"]
    sp = stats["shot_peening"]
    t3 = stats["trowalising_370"]
    t5 = stats["trowalising_510"]
    return (
        32 <= c["in_band_13_18"] <= 42
        and 2.33 <= c["mean_e"] <= 2.53
        and 2.74 <= c["sd_e"] <= 3.04
        and 7.1 <= c["max_e"] <= 7.6
        and 12.7 <= sp["mean_d"] <= 13.3
        and abs(sp["sd_e"] - 0.87) <= 0.04
        and 4 <= t3["in_band_151_155"] <= 6
        and 48.5 <= t3["mean_d"] <= 51.5
        and 7 <= t5["in_band_151_155"] <= 9
        and 128.0 <= t5["mean_d"] <= 132.0
    )


def main():
    print("=== solving profile parameters (quantized-law moments) ===")
    fit_cleaning()
    fit_shot_peening()
    fit_trowalising_370()
    fit_trowalising_510()

    print()
    print("=== seed search over the frozen profiles in loadaudit.synth ===")
    profiles = {p.load_id: p for p in la.case_study_profiles()}
    powers = {"cleaning": 9.6, "shot_peening": None, "trowalising_370": 7.0,
              "trowalising_510": 11.0}
    powers["shot_peening"] = profiles["shot_peening"].power_law.value

    chosen = None
    for seed in range(1, 501):
        stats = {
            lid: realized_stats(profiles[lid], seed, powers[lid] or 0.0)
            for lid in profiles
        }
        if seed_ok(stats):
            chosen = seed
            print(f"seed {seed}: OK")
            for lid, s in stats.items():
                print(f"  {lid}: {s}")
            break
    if chosen is None:
        print("no seed passed the comfort windows in 1..500")
        return 1

    print()
    print("=== pipeline verification for chosen seed ===")
    t0 = time.perf_counter()
    config = la.case_study_config()
    series = [la.generate_series(profiles[lid], chosen)[0] for lid in sorted(profiles)]
    report = la.run_analyze(config, series)
    elapsed = time.perf_counter() - t0
    for entry in report.loads:
        s = entry.stats
        print(f"  {entry.load_id}: verdict={entry.finding.verdict.value} "
              f"direction={entry.finding.direction.value} n={s.n_cycles} "
              f"mean_d={s.mean_duration_min:.3f} mean_e={s.mean_energy_kwh:.3f} "
              f"sd_e={s.std_energy_kwh:.3f} max_e={s.max_energy_kwh:.3f} "
              f"in_band={s.n_within_band} truncated={entry.diagnostics.truncated_cycles}")
    print(f"  pipeline time: {elapsed:.2f}s")
    print(f"\nfreeze CASE_STUDY_SEED = {chosen}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
