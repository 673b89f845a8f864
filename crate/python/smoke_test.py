#!/usr/bin/env python3
"""Smoke test for the nnru_py extension module.

Builds are produced by cargo (`cargo build --release -p nnru-py`); this
script locates the compiled cdylib under target/, imports it, and checks
the user-facing surface: presets, deterministic keygen, byte round trips,
serialization, security counts, and error mapping.
"""

import pathlib
import shutil
import subprocess
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent


def locate_cdylib() -> pathlib.Path:
    candidates = [
        ROOT / "target" / profile / name
        for profile in ("release", "debug")
        for name in ("libnnru_py.so", "libnnru_py.dylib", "nnru_py.dll")
    ]
    built = [p for p in candidates if p.exists()]
    if not built:
        sys.exit(
            "nnru_py cdylib not found; run `cargo build --release -p nnru-py` first"
        )
    return max(built, key=lambda p: p.stat().st_mtime)


def import_module(tmp: pathlib.Path):
    target = tmp / "nnru_py.so"
    shutil.copyfile(locate_cdylib(), target)
    sys.path.insert(0, str(tmp))
    import nnru_py  # noqa: E402

    return nnru_py


def main() -> None:
    with tempfile.TemporaryDirectory() as tmpdir:
        nnru_py = import_module(pathlib.Path(tmpdir))

        assert nnru_py.preset_names() == ["toy-micro", "toy", "small", "reference"]

        toy = nnru_py.Params.preset("toy")
        assert (toy.n, toy.k, toy.p, toy.q) == (7, 2, 3, 512)
        assert (toy.d_f, toy.d_w, toy.d_c, toy.d_phi) == (2, 2, 2, 2)
        assert toy.coeff_count == 7 * 2 * 2
        assert "n=7" in repr(toy)
        print("params:", repr(toy))

        model = toy.noise_model()
        assert 0 < model["sigma"] < model["sigma_naive"]
        assert model["margin"] > 5 and not model["failure_prone"]
        print(f"noise model: sigma={model['sigma']:.3f} margin={model['margin']:.2f}")

        # Deterministic keygen and stable serialization.
        pub1, priv1 = nnru_py.keygen(toy, 42)
        pub2, priv2 = nnru_py.keygen(toy, 42)
        assert pub1.to_bytes() == pub2.to_bytes()
        assert priv1.to_bytes() == priv2.to_bytes()
        assert nnru_py.PublicKey.from_bytes(pub1.to_bytes()).to_bytes() == pub1.to_bytes()
        assert nnru_py.PrivateKey.from_bytes(priv1.to_bytes()).to_bytes() == priv1.to_bytes()
        assert pub1.params.n == 7 and priv1.params.q == 512
        print(f"keygen: public {len(pub1.to_bytes())} bytes, private {len(priv1.to_bytes())} bytes")

        # Byte round trip, including an empty message.
        message = bytes(range(256)) * 3 + b"tail"
        ct = nnru_py.encrypt(pub1, message, 7)
        assert nnru_py.decrypt(priv1, ct) == message
        assert nnru_py.decrypt(priv1, nnru_py.encrypt(pub1, b"", 7)) == b""
        print(f"round trip: {len(message)} bytes -> {len(ct)} ciphertext bytes")

        # Encryption must be deterministic per seed and differ across seeds.
        assert nnru_py.encrypt(pub1, message, 7) == ct
        assert nnru_py.encrypt(pub1, message, 8) != ct

        # Cross-check against the CLI binary when it has been built: the
        # same seed must produce byte-identical key files.
        cli = ROOT / "target" / "release" / "nnru"
        if cli.exists():
            out = pathlib.Path(tmpdir)
            subprocess.run(
                [
                    str(cli), "keygen", "--preset", "toy", "--seed", "42",
                    "--public-out", str(out / "pub"), "--private-out", str(out / "priv"),
                ],
                check=True,
                capture_output=True,
            )
            assert (out / "pub").read_bytes() == pub1.to_bytes()
            assert (out / "priv").read_bytes() == priv1.to_bytes()
            print("cross-check: CLI key files match bindings byte for byte")

        # Closed-form security counts.
        micro = nnru_py.Params.preset("toy-micro")
        assert nnru_py.key_security(micro) == 400
        assert nnru_py.key_security(toy) == 3782285936100000000
        assert nnru_py.mitm_cost(nnru_py.key_security(toy)) == 1944810000
        # toy uses the same weight for keys and blinding, so the counts agree;
        # lowering d_phi must shrink only the message space.
        assert nnru_py.message_security(toy) == nnru_py.key_security(toy)
        lighter = nnru_py.Params(7, 2, 3, 512, d_f=2, d_w=2, d_c=2, d_phi=1)
        assert nnru_py.message_security(lighter) < nnru_py.key_security(lighter)
        print("security counts: toy-micro 400, toy 3782285936100000000 (MITM 1944810000)")

        # Error mapping: malformed bytes and invalid parameters -> ValueError.
        try:
            nnru_py.decrypt(priv1, ct[:-1])
        except ValueError:
            pass
        else:
            raise AssertionError("truncated ciphertext should raise ValueError")
        try:
            nnru_py.Params(11, 2, 2, 256)
        except ValueError:
            pass
        else:
            raise AssertionError("p=2, q=256 should fail the coprimality check")
        try:
            nnru_py.Params.preset("huge")
        except ValueError:
            pass
        else:
            raise AssertionError("unknown preset should raise ValueError")

        print("smoke test passed")


if __name__ == "__main__":
    main()
