"""Acceptance gate: every release criterion at its stated tolerance.

Run with `pytest tests/test_acceptance.py -v -s` to see one PASS line per
criterion with its wall time.  Sizes and tolerances are pinned here, not
configurable: these are the exit criteria of the project.
"""

import cmath
import math
import time

import numpy as np

from blaschke_lab.gallery import (
    frostman_shift,
    make_atomic_inner,
    make_escape_sequence,
    make_half_map,
    make_scaled_exponential,
    make_slit_map,
    make_slit_power,
)
from blaschke_lab.maps import (
    BlaschkeProduct,
    MobiusAutomorphism,
    blaschke_compose,
    blaschke_handle,
    mobius_handle,
    opaque,
)
from blaschke_lab.numerics import derivative_consistency
from blaschke_lab.valence import (
    heatmap_to_csv,
    heatmap_to_pgm,
    valence_at,
    valence_heatmap,
    winding_number,
)
from blaschke_lab.verifier import (
    check_theorem_3_1,
    check_theorem_3_2,
    check_theorem_A,
    check_theorem_B,
    check_theorem_C,
    demo_hurwitz_escape,
    hurwitz_table_csv,
)


def report(n, message, elapsed):
    print(f"PASS criterion {n}: {message} [{elapsed:.1f}s]")


def test_criterion_1_scaled_exponential_valence():
    t0 = time.perf_counter()
    f = make_scaled_exponential()
    plus = valence_at(f, 1e-10)
    elapsed = time.perf_counter() - t0
    assert plus.stabilized and plus.value == 3
    assert elapsed < 5.0
    minus = valence_at(f, -1e-10)
    assert minus.stabilized and minus.value == 4
    report(1, "valence(1e-10)=3 and valence(-1e-10)=4 for the scaled exponential",
           time.perf_counter() - t0)


def test_criterion_2_theorem_a_suite():
    t0 = time.perf_counter()
    suite = check_theorem_A(seed=1, n_products=100, n_targets=50)
    elapsed = time.perf_counter() - t0
    assert suite.ok, suite.failures[:3]
    forward = [c for c in suite.cases if c["kind"] == "blaschke-forward"]
    assert len(forward) == 5000
    assert all(c["valence"] == c["degree"] for c in forward)
    assert all(c["preimage_multiplicity"] == c["degree"] for c in forward)
    assert all(c["max_residual"] < 1e-6 for c in forward)
    assert elapsed < 120.0
    report(2, "100 products x 50 targets: winding = degree = preimage count", elapsed)


def test_criterion_3_theorem_b_suite():
    t0 = time.perf_counter()
    suite = check_theorem_B(seed=1, n_pairs=50)
    elapsed = time.perf_counter() - t0
    assert suite.ok, suite.failures[:3]
    assert all(c["pointwise_error"] < 1e-8 for c in suite.cases)
    assert elapsed < 60.0
    report(3, "50 compositions: exact degree multiplicativity, pointwise < 1e-8",
           elapsed)


def test_criterion_4_theorem_c_suite():
    t0 = time.perf_counter()
    suite = check_theorem_C(seed=1, n_products=50, n_mobius=20)
    elapsed = time.perf_counter() - t0
    assert suite.ok, suite.failures[:3]
    census = [c for c in suite.cases if c["kind"] == "critical-census"]
    recovery = [c for c in suite.cases if c["kind"] == "automorphism-recovery"]
    assert len(census) == 50 and len(recovery) == 20
    assert all(c["census"] == c["degree"] - 1 for c in census)
    assert all(c["census"] == 0 and c["sup_error"] < 1e-8 for c in recovery)
    assert elapsed < 60.0
    report(4, "critical census = degree-1; automorphism recovery < 1e-8", elapsed)


def test_criterion_5_pipeline_verdicts():
    t0 = time.perf_counter()
    disguised = opaque(mobius_handle(
        MobiusAutomorphism(alpha=0.3 + 0j, lam=cmath.exp(1j * math.pi / 3))))
    v_mobius = check_theorem_3_1(disguised, valence_bound=1)
    assert v_mobius.verdict == "automorphism"
    assert v_mobius.sup_error < 1e-9

    v_power = check_theorem_3_1(make_slit_power(2), valence_bound=2)
    assert v_power.verdict == "not-inner"

    v_atomic = check_theorem_3_1(make_atomic_inner(), valence_bound=1)
    assert v_atomic.verdict == "valence-unbounded"
    profile = dict(v_atomic.profile)
    assert [profile[r] for r in (0.9, 0.99, 0.999)] == [1, 5, 15]
    for r in (0.9, 0.99, 0.999):
        assert profile[r] == 2 * int(r / (math.pi * math.sqrt(1.0 - r * r))) + 1
    elapsed = time.perf_counter() - t0
    assert elapsed < 60.0
    report(5, "pipeline verdicts: automorphism / not-inner / valence-unbounded "
              "with growth profile (1, 5, 15)", elapsed)


def test_criterion_6_theorem_3_2_suite():
    t0 = time.perf_counter()
    suite = check_theorem_3_2(k=2, seed=0, n_membership=10000, n_valence=100)
    elapsed = time.perf_counter() - t0
    assert suite.ok, suite.failures[:3]
    by_kind = {c["kind"]: c for c in suite.cases}
    assert by_kind["roundtrip"]["samples"] == 1000
    assert by_kind["roundtrip"]["max_error"] < 1e-9
    assert by_kind["non-injectivity"]["separation"] > 0.1
    assert by_kind["non-injectivity"]["image_distance"] < 1e-9
    assert all(c == 0 for c in by_kind["omits-zero"]["counts"])
    assert by_kind["membership"]["samples"] >= 9999
    assert by_kind["membership"]["max_error"] < 1e-8
    assert by_kind["derivative-floor"]["min_abs"] > 1e-6
    assert by_kind["valence-bound"]["max_valence"] <= 2
    assert elapsed < 120.0
    report(6, "slit-power k=2: inverse round-trip, collision witness, omitted "
              "origin, 10^4-sample surjectivity, derivative floor", elapsed)


def test_criterion_7_numerical_hygiene():
    t0 = time.perf_counter()
    rng = np.random.default_rng(17)
    atomic = make_atomic_inner()
    random_b = BlaschkeProduct(
        lam=cmath.exp(0.9j),
        zeros=(0.4 + 0.2j, -0.5 + 0.1j, 0.1 - 0.6j, 0.3 + 0j))
    handles = [
        make_half_map(),
        make_scaled_exponential(),
        make_slit_map(),
        make_slit_power(2),
        atomic,
        frostman_shift(atomic, 0.2),
        make_escape_sequence(7),
        mobius_handle(MobiusAutomorphism(alpha=0.35 - 0.2j, lam=1j)),
        blaschke_handle(random_b),
        blaschke_handle(blaschke_compose(
            random_b, BlaschkeProduct(lam=1.0 + 0j, zeros=(0.2 + 0.1j,)))),
    ]
    for handle in handles:
        worst = 0.0
        for _ in range(100):
            z = complex(0.9 * math.sqrt(rng.uniform())
                        * cmath.exp(2j * math.pi * rng.uniform()))
            worst = max(worst, derivative_consistency(handle, z, 1e-5))
        assert worst < 1e-6, (handle.descriptor, worst)

    for _ in range(50):
        deg = int(rng.integers(1, 7))
        zeros = tuple(complex(0.9 * math.sqrt(rng.uniform())
                              * cmath.exp(2j * math.pi * rng.uniform()))
                      for _ in range(deg))
        b = blaschke_handle(BlaschkeProduct(lam=cmath.exp(2j * math.pi * rng.uniform()),
                                            zeros=zeros))
        w = complex(0.85 * math.sqrt(rng.uniform())
                    * cmath.exp(2j * math.pi * rng.uniform()))
        base, _ = winding_number(b, w, 0.97, initial_nodes=64)
        doubled, _ = winding_number(b, w, 0.97, initial_nodes=128)
        assert base == doubled

    grid_one = valence_heatmap(make_half_map(), 32, 0.99, threads=1)
    grid_many = valence_heatmap(make_half_map(), 32, 0.99, threads=4)
    assert heatmap_to_csv(grid_one) == heatmap_to_csv(grid_many)
    assert heatmap_to_pgm(grid_one) == heatmap_to_pgm(grid_many)
    report(7, "derivative consistency on every map type, node-doubling "
              "stability, worker-count-independent heatmap bytes",
           time.perf_counter() - t0)


def test_criterion_8_hurwitz_escape_table():
    t0 = time.perf_counter()
    rows, limit_value = demo_hurwitz_escape((2, 10, 100), 0.1)
    assert rows == [(2, 2), (10, 2), (100, 2)]
    assert limit_value == 1
    csv = hurwitz_table_csv(rows, limit_value)
    assert csv == "n,valence\n2,2\n10,2\n100,2\nlimit,1\n"
    report(8, "escape family keeps valence 2 while the limit map has valence 1",
           time.perf_counter() - t0)
