"""
Golden oracle tables for the special functions.

File format: ``#`` comment header, then one whitespace-separated row per value::

    function  l  re_z  im_z  re_value  im_value

with 20 significant digits.  ``function`` is one of ``j``, ``n``, ``h1``,
``h2``, ``bessel_poly``, ``legendre``.  Tables are produced with mpmath at
high working precision; mpmath is only needed to regenerate them.

Regenerate with ``python -m nearfield.golden tests/data/golden_specfun.txt``.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from pathlib import Path

FUNCTIONS = ("j", "n", "h1", "h2", "bessel_poly", "legendre")


@dataclass(frozen=True)
class GoldenRow:
    function: str
    l: int
    z: complex
    value: complex


def read_golden(path) -> list[GoldenRow]:
    rows = []
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        f, l, rz, iz, rv, iv = line.split()
        if f not in FUNCTIONS:
            raise ValueError(f"unknown function {f!r} in golden file")
        rows.append(GoldenRow(f, int(l), complex(float(rz), float(iz)), complex(float(rv), float(iv))))
    return rows


def write_golden(path, rows, header: str) -> None:
    lines = [f"# {h}" for h in header.splitlines()]
    lines.append("# function l re_z im_z re_value im_value")
    for f, l, z, v in rows:
        lines.append(f"{f} {l} {_fmt(z.real)} {_fmt(z.imag)} {_fmt(v.real)} {_fmt(v.imag)}")
    Path(path).write_text("\n".join(lines) + "\n")


def _fmt(x) -> str:
    import mpmath

    return mpmath.nstr(x, 20, min_fixed=1, max_fixed=0) if x != 0 else "0.0"


def _cases():
    reals = [0.05, 0.3, 1.0, 2.5, 3.141592653589793, 7.0, 20.0, 50.0, 137.5, 1000.0]
    complexes = [0.5 + 0.25j, 1.0 + 1.0j, 3.0 - 2.0j, 10.0 + 1.5j, 0.2 - 0.7j, 25.0 + 0.5j]
    orders = [0, 1, 2, 3, 5, 10, 20, 40, 100]
    for z in reals + complexes:
        for l in orders:
            yield l, complex(z)


def generate(dps: int = 30):
    import mpmath

    mpmath.mp.dps = dps
    rows = []
    for l, z in _cases():
        zz = mpmath.mpc(z.real, z.imag)
        pref = mpmath.sqrt(mpmath.pi / (2 * zz))
        nu = l + mpmath.mpf(1) / 2
        j = pref * mpmath.besselj(nu, zz)
        n = pref * mpmath.bessely(nu, zz)
        # n_l overflows doubles for tiny z and large l
        if abs(n) > mpmath.mpf("1e300"):
            continue
        for name, val in (("j", j), ("n", n), ("h1", j + 1j * n), ("h2", j - 1j * n)):
            rows.append((name, l, zz, mpmath.mpc(val)))
    for l in (0, 1, 2, 3, 5, 10, 20, 40, 100):
        for x in (0.5, 0.2j, -0.1j, 0.05j, 0.3 + 0.4j, -0.25 + 0.1j, 1j, 0.01j):
            xx = mpmath.mpc(x.real, x.imag)
            val = mpmath.fsum(
                mpmath.factorial(l + m) / (mpmath.factorial(l - m) * mpmath.factorial(m)) * (xx / 2) ** m
                for m in range(l + 1)
            )
            rows.append(("bessel_poly", l, xx, val))
    for l in (0, 1, 2, 5, 10, 50, 200, 1000):
        for x in ("-1", "-0.999", "-0.5", "0", "0.3", "0.70710678118654752440", "0.9999", "1"):
            xx = mpmath.mpf(float(x))
            rows.append(("legendre", l, mpmath.mpc(xx), mpmath.mpc(mpmath.legendre(l, xx))))
    header = (
        f"generated by nearfield.golden with mpmath {mpmath.__version__} at mp.dps = {dps}\n"
        "j, n: sqrt(pi/2z) J/Y_{l+1/2}(z); h1, h2 = j +- i n; "
        "bessel_poly: explicit factorial sum; legendre: mpmath.legendre"
    )
    return rows, header


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if len(argv) != 1:
        print("usage: python -m nearfield.golden OUTPUT", file=sys.stderr)
        return 2
    rows, header = generate()
    write_golden(argv[0], rows, header)
    return 0


if __name__ == "__main__":
    sys.exit(main())
