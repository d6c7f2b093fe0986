"""Print the two B=3 walkthrough tables (weights/activations, and the corrected pass)."""

import argparse

from btncodec.approx import weight_walkthrough_rows, correction_walkthrough_rows


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--which", choices=["1", "2", "both"], default="both")
    args = parser.parse_args()
    if args.which in ("1", "both"):
        print("% pattern & w_i0 & w_i1 & y_i0 & y_i1 & z")
        print("\n".join(weight_walkthrough_rows()))
    if args.which in ("2", "both"):
        print("% pattern & chi_011 & z & z'")
        print("\n".join(correction_walkthrough_rows()))


if __name__ == "__main__":
    main()
