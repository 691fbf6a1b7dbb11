"""Write the annual Nile flow series (1871-1970) to data/nile.csv.

Uses the copy shipped with statsmodels, so no network access is needed.
"""
import pathlib
import sys

from statsmodels.datasets import nile


def main() -> int:
    out = pathlib.Path(sys.argv[1]) if len(sys.argv) > 1 else pathlib.Path(__file__).resolve().parent.parent / "data" / "nile.csv"
    df = nile.load_pandas().data
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w") as f:
        f.write("year,volume\n")
        for y, v in zip(df["year"], df["volume"]):
            f.write(f"{int(y)},{v:g}\n")
    print(f"wrote {len(df)} rows to {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
