#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "metasim/canonical.hpp"
#include "metasim/crypto.hpp"
#include "metasim/ledger.hpp"
#include "metasim/wallet.hpp"

namespace metasim::testing {

inline Bytes seed_from(std::string_view label, std::uint64_t n = 0) {
    return sha256(Encoder{}.str(label).u64(n).take());
}

inline Bytes random_bytes(std::mt19937_64& rng, std::size_t n) {
    Bytes out(n);
    for (auto& b : out)
        b = static_cast<std::uint8_t>(rng());
    return out;
}

// A wallet whose identity key is already self-attested on `ledger`.
inline Wallet published_wallet(Ledger& ledger, std::string_view name, bool mint = false) {
    auto w = Wallet::create(seed_from(name), ledger.crypto());
    w.publish_identity(ledger);
    if (mint)
        w.mint(ledger);
    return w;
}

// Issues `predicate` to `holder`, hands the certificate over and optionally
// publishes it on the ledger.
inline AttestationCertificate attest(const Wallet& tp, Wallet& holder, Ledger& ledger,
                                     const std::string& predicate = "world_member",
                                     bool publish = true) {
    auto cert = issue_attestation(tp, Claim{predicate, holder.nft_id()}, ledger);
    holder.hold_certificate(cert);
    if (publish)
        ledger.publish_attestation(AttestationRecord::from(cert));
    return cert;
}

}  // namespace metasim::testing
