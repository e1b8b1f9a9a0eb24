"""Builds the extension module and exercises the Python API.

Run from anywhere: python3 crates/python/python/smoke_test.py
"""

import pathlib
import shutil
import subprocess
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parents[3]
FALSE_POSITIVE = "y^2 = x^5 - 2x^4 + 6x^3 + 5x^2 + 10x + 5"


def build_module(dest: pathlib.Path) -> None:
    subprocess.run(
        ["cargo", "build", "--release", "-p", "g2screen-py", "--features", "extension-module"],
        cwd=ROOT,
        check=True,
    )
    shutil.copy(ROOT / "target" / "release" / "libg2screen_py.so", dest / "g2screen_py.so")


def main() -> int:
    with tempfile.TemporaryDirectory() as tmp:
        build_module(pathlib.Path(tmp))
        sys.path.insert(0, tmp)
        import g2screen_py as g

        curve = g.Curve(FALSE_POSITIVE)
        assert curve.f == [5, 10, 5, 6, -2, 1, 0], curve.f
        assert curve.discriminant == str(2**8 * 5**6 * 17**3)
        assert g.Curve(curve.to_list_line()).f == curve.f

        rec = g.lpolynomial(curve, 151)
        assert (rec["n1"], rec["c1"]) == (157, 5), rec
        assert g.a_q(curve, 151) == 5

        assert 85 in g.candidate_discriminants(curve, 3)
        early = g.screen_curve(curve, 3, 100, fields=[28])
        late = g.screen_curve(curve, 3, 151, fields=[28])
        assert early["verdicts"][0]["passed"]
        assert late["verdicts"][0]["failing_prime"] == 151

        try:
            g.lpolynomial(curve, 17)
        except ValueError:
            pass
        else:
            raise AssertionError("bad prime accepted")

        row = g.Curve("y^2 = 2x^5 - 8x^4 + 26x^2 - 7x - 26")
        local = g.local_checks(row, 3)
        assert local["ordinary"] and local["p_distinguished"], local
        cert = g.certify(row, 3)
        assert cert["D"] is not None and cert["local"]["good_at_p"]

        assert g.trace_zero_fraction(3) == (231, 640)
        tables = g.group_tables(3)
        assert tables["orbit_table"]["G'480"] == [40]

        twist = g.Curve.from_coefficients([1, 0, 0, 0, 0, 1], h=[1]).twist(-3)
        assert twist.f == [-15, 0, 0, 0, 0, -12, 0], twist.f
        print(f"g2screen_py {g.__version__}: smoke test passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
