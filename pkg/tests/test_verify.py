"""Self-check suite: green on the quick grid, red under fault injection."""

from qvint.verify import run_all


def test_quick_suite_all_green():
    results = run_all(quick=True)
    names = [r.name for r in results]
    assert len(names) == len(set(names))
    assert len(results) >= 40
    assert all(r.ok for r in results), [r for r in results if not r.ok]
    assert all(r.detail for r in results)


def test_corrupt_modulus_fails_only_the_irreducibility_check():
    results = run_all(quick=True, corrupt_modulus=True)
    failed = {r.name for r in results if not r.ok}
    assert failed == {"modulus-irreducible-q4"}
