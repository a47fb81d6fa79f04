"""Command line front-end: reproducible experiments, machine-readable reports.

Four subcommands share one option vocabulary:

* analyze: domain statistics and query planning, no enumeration.
* enumerate: the exhaustive pre-image census with bound comparisons.
* simulate: end-to-end state simulation, analytic and sampled.
* verify: the named self-check suite (one line per check).

Reports are JSON by default (CSV only for the raw census table) and are
byte-identical across runs for the same configuration and seed; wall-clock
timings are included only when --timings is passed.  Exit codes: 0 success,
1 failed check or broken invariant, 2 usage error, 3 resource cap.
"""

import json
import math
import sys
import time
from fractions import Fraction

import click
import numpy as np

from . import census as census_mod
from . import complexity, simulator, verify as verify_mod
from .domain import (VectorFq, build_monomial_domain,
                     build_vandermonde_domain, parse_vector, read_domain_file)
from .errors import ContractError, ParameterError, ResourceCapError
from .field import parse_field_spec


def _jsonable(value):
    """Recursively coerce report values into JSON-stable primitives."""
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def _emit(report: dict, out, fmt: str):
    if fmt != "json":
        raise ParameterError("csv output only applies to the enumerate census table")
    text = json.dumps(_jsonable(report), indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w", encoding="ascii") as fh:
            fh.write(text)
        click.echo(f"wrote {out}")
    else:
        click.echo(text, nl=False)


def _census_csv(census) -> str:
    lines = ["z,count,good_count"]
    for key in sorted(census.counts):
        digits = "-".join(str(c) for c in key)
        lines.append(f"{digits},{census.counts[key]},{census.good_counts.get(key, 0)}")
    return "\n".join(lines) + "\n"


def domain_options(cmd):
    cmd = click.option(
        "--field", "field_spec", default=None, metavar="Q[:C0,C1,...]",
        help="Field order p^r, optionally with an explicit modulus.")(cmd)
    cmd = click.option(
        "--vandermonde", type=int, default=None, metavar="D",
        help="Rows (1, x, ..., x^D) over the whole field.")(cmd)
    cmd = click.option(
        "--monomial", default=None, metavar="M,D",
        help="All degree-<=D monomial rows in M variables.")(cmd)
    cmd = click.option(
        "--domain-file", type=click.Path(), default=None,
        help="Explicit domain file (carries its own field).")(cmd)
    return cmd


def output_options(cmd):
    cmd = click.option("--out", type=click.Path(), default=None,
                       help="Write the report here instead of stdout.")(cmd)
    cmd = click.option("--format", "fmt", type=click.Choice(["json", "csv"]),
                       default="json", help="Report format (csv: census table only).")(cmd)
    cmd = click.option("--timings", is_flag=True,
                       help="Include wall-clock timings (breaks byte-reproducibility).")(cmd)
    return cmd


def _build_domain(field_spec, vandermonde, monomial, domain_file):
    """Resolve the mutually exclusive domain flags into a Domain."""
    chosen = [x for x in (vandermonde, monomial, domain_file) if x is not None]
    if len(chosen) != 1:
        raise ParameterError(
            "exactly one of --vandermonde, --monomial, --domain-file is required"
        )
    if domain_file is not None:
        if field_spec is not None:
            raise ParameterError("--domain-file carries its own field; drop --field")
        domain = read_domain_file(domain_file)
        return domain, None
    if field_spec is None:
        raise ParameterError("--field is required with --vandermonde/--monomial")
    params = parse_field_spec(field_spec)
    if vandermonde is not None:
        return build_vandermonde_domain(params, vandermonde), None
    try:
        m_text, d_text = monomial.split(",")
        m, d = int(m_text), int(d_text)
    except ValueError:
        raise ParameterError(f"--monomial expects 'M,D', got {monomial!r}") from None
    return build_monomial_domain(params, m, d), (m, d)


def _resolve_k(domain, k):
    """Explicit k, or the planned one (high-probability rule when defined)."""
    if k is not None:
        if k < 0:
            raise ParameterError("--k must be non-negative")
        return k, "explicit"
    stats = domain.stats()
    try:
        plan = complexity.plan_high_probability(
            stats.length, stats.field_order, stats.size, stats.zero_touching
        )
    except ParameterError:
        plan = complexity.plan_bounded_error(stats.length, stats.field_order, stats.size)
    return plan.k, plan.rule


def _domain_block(domain):
    stats = domain.stats()
    return {
        "label": stats.label,
        "field_order": stats.field_order,
        "characteristic": stats.characteristic,
        "extension_degree": stats.extension_degree,
        "length": stats.length,
        "size": stats.size,
        "zero_touching": stats.zero_touching,
    }


def _plan_block(plan):
    return {"k": plan.k, "rule": plan.rule, "note": plan.note}


def _config_echo(**kwargs):
    return {key: value for key, value in kwargs.items()}


@click.group()
@click.version_option(package_name="qvint")
def main():
    """Exact desk-scale experiments on secret-vector interpolation."""


@main.command()
@domain_options
@output_options
@click.option("--k", type=int, default=None, help="Classify this query count.")
def analyze(field_spec, vandermonde, monomial, domain_file, k, out, fmt, timings):
    """Domain statistics and query planning; no enumeration."""
    started = time.perf_counter()

    def body():
        domain, mono_md = _build_domain(field_spec, vandermonde, monomial, domain_file)
        stats = domain.stats()
        try:
            rep = domain.independence()
            independence = {
                "status": rep.status,
                "subset_size": rep.subset_size,
                "subsets_checked": rep.subsets_checked,
            }
            if rep.witness is not None:
                independence["witness"] = [list(v.index_tuple()) for v in rep.witness]
        except ResourceCapError as exc:
            independence = {"status": "skipped", "reason": str(exc)}

        low = complexity.plan_bounded_error(stats.length, stats.field_order, stats.size)
        high = None
        high_error = None
        try:
            high = complexity.plan_high_probability(
                stats.length, stats.field_order, stats.size, stats.zero_touching
            )
        except ParameterError as exc:
            high_error = str(exc)

        report = {
            "command": "analyze",
            "config": _config_echo(
                field=field_spec, vandermonde=vandermonde, monomial=monomial,
                domain_file=domain_file, k=k,
            ),
            "domain": _domain_block(domain),
            "independence": independence,
            "plan": {
                "bounded_error": _plan_block(low),
                "high_probability": None if high is None else _plan_block(high),
                "high_probability_error": high_error,
            },
        }
        if mono_md is not None:
            m, d = mono_md
            lower, upper = complexity.multivariate_query_bounds(
                stats.length, stats.field_order, m
            )
            reduction = complexity.univariate_reduction(m, d)
            report["monomial"] = {
                "bounds": {"lower": lower, "upper": upper},
                "reduction": {
                    "exponents": list(reduction.exponents),
                    "reduced_degree": reduction.reduced_degree,
                    "suggested_k": reduction.suggested_k,
                    "note": reduction.note,
                },
            }
        if k is not None:
            cls = complexity.classify_instance(stats, k)
            report["classification"] = {
                "k": cls.k,
                "summary": cls.summary,
                "meets_bounded_error": cls.meets_bounded_error,
                "meets_high_probability": cls.meets_high_probability,
            }
        if timings:
            report["timings"] = {"total_seconds": time.perf_counter() - started}
        _emit(report, out, fmt)

    _guarded(body)


@main.command(name="enumerate")
@domain_options
@output_options
@click.option("--k", type=int, default=None, help="Query count (planned if omitted).")
@click.option("--max-tuples", type=int, default=census_mod.DEFAULT_MAX_TUPLES,
              show_default=True, help="Enumeration cap on (|V|*q)^k.")
def cmd_enumerate(field_spec, vandermonde, monomial, domain_file, k, max_tuples,
                  out, fmt, timings):
    """Exhaustive pre-image census with bound comparisons."""
    started = time.perf_counter()

    def body():
        domain, _ = _build_domain(field_spec, vandermonde, monomial, domain_file)
        k_value, k_rule = _resolve_k(domain, k)
        census = census_mod.enumerate_census(domain, k_value, max_tuples=max_tuples)
        if fmt == "csv":
            text = _census_csv(census)
            if out:
                with open(out, "w", encoding="ascii") as fh:
                    fh.write(text)
                click.echo(f"wrote {out}")
            else:
                click.echo(text, nl=False)
            return

        identity = census_mod.second_moment_identity_check(
            domain, k_value, census=census, max_tuples=max_tuples
        )
        cheb = census_mod.chebyshev_zero_bound(domain, k_value)
        observed = census.zero_count_fraction()
        lower = None
        lower_note = None
        try:
            lower = census_mod.image_size_lower_bound(domain, k_value)
        except (ContractError, ResourceCapError) as exc:
            lower_note = str(exc)

        report = {
            "command": "enumerate",
            "config": _config_echo(
                field=field_spec, vandermonde=vandermonde, monomial=monomial,
                domain_file=domain_file, k=k_value, k_rule=k_rule,
                max_tuples=max_tuples,
            ),
            "domain": _domain_block(domain),
            "census": {
                "image_size": census.image_size,
                "codomain_size": census.codomain_size,
                "total_tuples": census.total,
                "success_probability": census.success_probability(),
                "success_probability_float": float(census.success_probability()),
                "mean_count": census.mean(),
                "variance": census.variance(),
                "second_moment_sum": census.second_moment_sum(),
            },
            "bounds": {
                "image_lower_bound": lower,
                "image_lower_bound_note": lower_note,
                "lower_bound_satisfied": None if lower is None
                else census.image_size >= lower,
                "chebyshev_zero_bound": cheb,
                "observed_zero_fraction": observed,
                "chebyshev_consistent": observed <= cheb,
            },
            "second_moment_identity": {
                "lhs": identity.lhs,
                "rhs": identity.rhs,
                "equal": identity.equal,
            },
        }
        if timings:
            report["timings"] = {"total_seconds": time.perf_counter() - started}
        _emit(report, out, fmt)
        if not identity.equal or observed > cheb:
            sys.exit(1)

    _guarded(body)


@main.command()
@domain_options
@output_options
@click.option("--k", type=int, default=None, help="Query count (planned if omitted).")
@click.option("--secret", default="random", metavar="SPEC",
              help="Element list 'a,b,...', or 'sweep' (all secrets), or 'random'.")
@click.option("--trials", type=int, default=0, show_default=True,
              help="Empirical samples on top of the analytic result.")
@click.option("--seed", type=int, default=0, show_default=True,
              help="PRNG seed for sampling and random secrets.")
@click.option("--max-tuples", type=int, default=census_mod.DEFAULT_MAX_TUPLES,
              show_default=True, help="Enumeration cap on (|V|*q)^k.")
def simulate(field_spec, vandermonde, monomial, domain_file, k, secret, trials,
             seed, max_tuples, out, fmt, timings):
    """Run the k-query procedure; report analytic and sampled outcomes."""
    started = time.perf_counter()

    def body():
        if trials < 0:
            raise ParameterError("--trials must be non-negative")
        domain, _ = _build_domain(field_spec, vandermonde, monomial, domain_file)
        params = domain.params
        k_value, k_rule = _resolve_k(domain, k)
        census = census_mod.enumerate_census(domain, k_value, max_tuples=max_tuples)
        image = census_mod.image_set(census)
        transversal = census_mod.build_transversal(domain, k_value, max_tuples=max_tuples)
        analytic = census.success_probability()

        report = {
            "command": "simulate",
            "config": _config_echo(
                field=field_spec, vandermonde=vandermonde, monomial=monomial,
                domain_file=domain_file, k=k_value, k_rule=k_rule,
                secret=secret, trials=trials, seed=seed, max_tuples=max_tuples,
            ),
            "domain": _domain_block(domain),
            "image_size": image.size,
            "codomain_size": census.codomain_size,
            "analytic": {
                "success_probability": analytic,
                "success_probability_float": float(analytic),
            },
        }

        codomain = census.codomain_size
        if secret == "sweep":
            if codomain > 4096:
                raise ResourceCapError(
                    f"sweep over {codomain} secrets exceeds the built-in limit 4096"
                )
            errors = []
            for flat in range(codomain):
                s = _unflatten(params, domain.n, flat)
                state = simulator.run_algorithm(domain, k_value, transversal, s)
                errors.append(abs(simulator.success_probability(state, s) - float(analytic)))
            report["sweep"] = {
                "secrets": codomain,
                "max_abs_error": max(errors),
                "secret_independent": max(errors) < 1e-9,
            }
            if timings:
                report["timings"] = {"total_seconds": time.perf_counter() - started}
            _emit(report, out, fmt)
            if max(errors) >= 1e-9:
                sys.exit(1)
            return

        if secret == "random":
            rng = np.random.default_rng(seed)
            flat = int(rng.integers(codomain))
            secret_vector = _unflatten(params, domain.n, flat)
        else:
            secret_vector = parse_vector(params, secret)
            if secret_vector.n != domain.n:
                raise ParameterError(
                    f"secret has {secret_vector.n} coordinates, domain needs {domain.n}"
                )
        report["secret"] = list(secret_vector.index_tuple())

        state = simulator.run_algorithm(domain, k_value, transversal, secret_vector)
        dist = simulator.outcome_distribution(state)
        measured = simulator.success_probability(state, secret_vector)
        report["analytic"]["measured_success_probability"] = measured
        report["analytic"]["matches_image_ratio"] = abs(measured - float(analytic)) < 1e-9
        report["analytic"]["top_outcomes"] = [
            {"outcome": list(v.index_tuple()), "probability": p}
            for v, p in dist.top(5)
        ]

        if trials > 0:
            sample = simulator.sample_outcomes(dist, trials, seed)
            p = float(analytic)
            tolerance = 3 * math.sqrt(p * (1 - p) / trials) if 0 < p < 1 else 0.0
            top = sorted(sample.counts.items(), key=lambda kv: (-kv[1], kv[0]))[:5]
            report["empirical"] = {
                "trials": trials,
                "seed": seed,
                "frequency_of_secret": sample.frequency_of(secret_vector),
                "tolerance_3sigma": tolerance,
                "within_tolerance":
                    abs(sample.frequency_of(secret_vector) - p) <= tolerance
                    if tolerance else sample.frequency_of(secret_vector) == p,
                "top_outcomes": [
                    {"outcome": list(key), "count": count, "frequency": count / trials}
                    for key, count in top
                ],
            }
        if timings:
            report["timings"] = {"total_seconds": time.perf_counter() - started}
        _emit(report, out, fmt)
        if not report["analytic"]["matches_image_ratio"]:
            sys.exit(1)

    _guarded(body)


@main.command()
@click.option("--quick", is_flag=True, help="Small sub-10-second grid.")
@click.option("--max-tuples", type=int, default=census_mod.DEFAULT_MAX_TUPLES,
              show_default=True, help="Enumeration cap on (|V|*q)^k.")
@click.option("--inject-corrupt-modulus", is_flag=True, hidden=True)
def verify(quick, max_tuples, inject_corrupt_modulus):
    """Run the named self-check suite; one line per check."""

    def body():
        results = verify_mod.run_all(
            quick=quick, corrupt_modulus=inject_corrupt_modulus,
            max_tuples=max_tuples,
        )
        failures = 0
        for result in results:
            tag = "PASS" if result.ok else "FAIL"
            click.echo(f"{tag}  {result.name}: {result.detail}")
            failures += 0 if result.ok else 1
        click.echo(f"{len(results) - failures}/{len(results)} checks passed")
        if failures:
            sys.exit(1)

    _guarded(body)


def _unflatten(params, n, flat):
    digits = []
    for _ in range(n):
        flat, c = divmod(flat, params.q)
        digits.append(c)
    return VectorFq.from_index_tuple(params, tuple(reversed(digits)))


def _guarded(body):
    """Map package errors onto the documented exit codes."""
    try:
        body()
    except ParameterError as exc:
        raise click.UsageError(str(exc)) from exc
    except ResourceCapError as exc:
        click.echo(f"resource cap exceeded: {exc}", err=True)
        sys.exit(3)
    except ContractError as exc:
        click.echo(f"invariant violated: {exc}", err=True)
        sys.exit(1)


if __name__ == "__main__":
    main()
