"""Independent oracle for tests/vectors/x3dh_vectors.txt.

Recomputes X3DH session keys from raw seeds without touching the C++ code:
the toy group arithmetic is redone with Python integers, and the default
provider's Ed25519 -> X25519 mapping is done with the `cryptography`
package plus the birational map u = (1 + y) / (1 - y) mod 2^255 - 19.

    python3 tests/vectors/gen_x3dh_vectors.py > tests/vectors/x3dh_vectors.txt
"""

import hashlib
import struct

from cryptography.hazmat.primitives import hashes, serialization
from cryptography.hazmat.primitives.asymmetric import ed25519, x25519
from cryptography.hazmat.primitives.kdf.hkdf import HKDF

X3DH_INFO = b"metaverse-x3dh-v1"


def frame(*parts):
    return b"".join(struct.pack(">I", len(p)) + p for p in parts)


def kdf(inputs, info, length=32):
    ikm = struct.pack(">I", len(inputs)) + frame(*inputs)
    return HKDF(algorithm=hashes.SHA256(), length=length, salt=None, info=info).derive(ikm)


# --- toy provider ---------------------------------------------------------

P = 4611686018427377339
Q = 2305843009213688669
G = 4


def toy_keypair(seed):
    h = hashlib.sha256(frame(seed, b"toy-keygen")).digest()
    x = int.from_bytes(h[:8], "big") % (Q - 1) + 1
    return x, pow(G, x, P)


def toy_dh(x, y):
    return pow(y, x, P).to_bytes(8, "big")


def toy_x3dh(ik_i, ek_i, ik_r, spk_r):
    (ii, _), (ei, _), (_, ir), (_, sr) = map(toy_keypair, (ik_i, ek_i, ik_r, spk_r))
    return kdf([toy_dh(ii, sr), toy_dh(ei, ir), toy_dh(ei, sr)], X3DH_INFO)


# --- default provider -----------------------------------------------------

FIELD = 2**255 - 19


def ed_public(seed):
    key = ed25519.Ed25519PrivateKey.from_private_bytes(seed)
    return key.public_key().public_bytes(serialization.Encoding.Raw, serialization.PublicFormat.Raw)


def curve_public(ed_pub):
    y = int.from_bytes(ed_pub, "little") & ((1 << 255) - 1)
    u = (1 + y) * pow(1 - y, FIELD - 2, FIELD) % FIELD
    return u.to_bytes(32, "little")


def curve_private(seed):
    h = bytearray(hashlib.sha512(seed).digest()[:32])
    h[0] &= 248
    h[31] &= 127
    h[31] |= 64
    return bytes(h)


def x_dh(seed, ed_pub):
    mine = x25519.X25519PrivateKey.from_private_bytes(curve_private(seed))
    return mine.exchange(x25519.X25519PublicKey.from_public_bytes(curve_public(ed_pub)))


def default_x3dh(ik_i, ek_i, ik_r, spk_r):
    ir, sr = ed_public(ik_r), ed_public(spk_r)
    return kdf([x_dh(ik_i, sr), x_dh(ek_i, ir), x_dh(ek_i, sr)], X3DH_INFO)


def seed(tag, i):
    return hashlib.sha256(f"{tag}-{i}".encode()).digest()


def main():
    print("# provider|ik_init_seed|ek_init_seed|ik_resp_seed|spk_resp_seed|session_key")
    for provider, fn in (("test", toy_x3dh), ("default", default_x3dh)):
        for i in range(8):
            seeds = [seed(t, i) for t in ("ik-i", "ek-i", "ik-r", "spk-r")]
            key = fn(*seeds)
            print("|".join([provider] + [s.hex() for s in seeds] + [key.hex()]))


if __name__ == "__main__":
    main()
