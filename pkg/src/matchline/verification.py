"""Verification suites behind ``matchline verify``.

Each suite returns the number of failed checks (0 = pass). The same
predicates back the pytest acceptance module; here they are sized by the
caller for quick command line runs.
"""

from __future__ import annotations

from .divide import divide_run
from .generators import gen_family, gen_uniform, verify_family
from .lr import lr_oracle, lr_run
from .model import total_cost
from .offline import (
    all_optimal_assignments,
    brute_force_optimal,
    monotone_optimal,
    order_condition_violations,
)


def _noop(*_args, **_kwargs):
    pass


def verify_lr_optimal(n_max: int = 8, seeds: int = 50, log=_noop) -> int:
    """LR with oracle advice is exactly optimal and reads <= n-1 bits."""
    failures = 0
    for n in range(2, n_max + 1):
        for seed in range(seeds):
            instance = gen_uniform(n, (0, 4 * n), seed, integer_mode=True)
            result = lr_run(instance, lr_oracle(instance))
            opt = brute_force_optimal(instance).cost
            if result.matching.cost != opt or result.bits_read > n - 1:
                failures += 1
                log(f"  FAIL n={n} seed={seed}: cost={result.matching.cost} opt={opt}")
        log(f"  lr-optimal n={n}: {seeds} instances checked")
    return failures


def verify_divide_exact(n_max: int = 8, seeds: int = 30, log=_noop) -> int:
    """DIVIDE_k with the clairvoyant subroutine matches the exact optimum."""
    failures = 0
    for n in range(2, n_max + 1):
        for k in range(1, n + 1):
            for seed in range(seeds):
                instance = gen_uniform(
                    n, (0, 4 * n), seed, integer_mode=True, request_range="span"
                )
                result = divide_run(instance, k, "clairvoyant")
                opt = brute_force_optimal(instance).cost
                if result.matching.cost != opt:
                    failures += 1
                    log(
                        f"  FAIL n={n} k={k} seed={seed}: "
                        f"cost={result.matching.cost} opt={opt}"
                    )
        log(f"  divide-exact n={n}: all k, {seeds} instances each")
    return failures


def verify_family_suite(n_max: int = 8, seeds: int = 0, log=_noop) -> int:
    """Family cardinality and the forced top-server assignment."""
    del seeds
    failures = 0
    for n in range(1, min(n_max, 12) + 1):
        if len(gen_family(n)) != 2 ** (n - 1):
            failures += 1
            log(f"  FAIL cardinality at n={n}")
    for n in range(2, min(n_max, 8) + 1):
        bad = [c for c in verify_family(n) if not c.ok]
        failures += len(bad)
        log(f"  family n={n}: {2 ** (n - 1)} members, {len(bad)} failures")
    return failures


def verify_order_properties(n_max: int = 6, seeds: int = 30, log=_noop) -> int:
    """Order structure of optima and cost-preserving switches."""
    failures = 0
    for n in range(2, min(n_max, 7) + 1):
        for seed in range(seeds):
            instance = gen_uniform(n, (0, 3 * n), seed, integer_mode=True)
            for perm in all_optimal_assignments(instance):
                if order_condition_violations(instance, perm):
                    failures += 1
                    log(f"  FAIL order property n={n} seed={seed} perm={perm}")
            matching = monotone_optimal(instance)
            for i in range(n):
                for j in range(i + 1, n):
                    ri, rj = instance.requests[i], instance.requests[j]
                    si = instance.servers[matching.assignment[i]]
                    sj = instance.servers[matching.assignment[j]]
                    if max(ri, rj) <= min(si, sj) or min(ri, rj) >= max(si, sj):
                        swapped = list(matching.assignment)
                        swapped[i], swapped[j] = swapped[j], swapped[i]
                        if total_cost(instance, swapped) != matching.cost:
                            failures += 1
                            log(f"  FAIL switch property n={n} seed={seed} ({i},{j})")
        log(f"  props n={n}: {seeds} instances checked")
    return failures
