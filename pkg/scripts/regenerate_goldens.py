"""Regenerate the sampler golden files under tests/golden/.

Run after an intentional change to the samplers or the PRNG contract:

    python scripts/regenerate_goldens.py
"""

from pathlib import Path

from matpersp.linalg import make_rng, sample_density, sample_hermitian, sample_isometric_pair, sample_positive
from matpersp.serialize import dumps, matrix_to_dict

OUT = Path(__file__).resolve().parents[1] / "tests" / "golden"


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    files = {
        "hermitian_seed42_n2.json": matrix_to_dict(sample_hermitian(2, 1.0, make_rng(42)), "hermitian"),
        "hermitian_seed43_n2.json": matrix_to_dict(sample_hermitian(2, 1.0, make_rng(43)), "hermitian"),
        "positive_seed42_n3.json": matrix_to_dict(sample_positive(3, make_rng(42)), "positive"),
        "density_seed42_n3.json": matrix_to_dict(sample_density(3, make_rng(42)), "density"),
    }
    A, B = sample_isometric_pair(2, make_rng(42))
    files["isometric_pair_seed42_n2.json"] = {"a": matrix_to_dict(A), "b": matrix_to_dict(B)}
    for name, payload in files.items():
        (OUT / name).write_text(dumps(payload), encoding="utf-8")
        print("wrote", OUT / name)


if __name__ == "__main__":
    main()
