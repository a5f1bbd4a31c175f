#pragma once

#include <compare>
#include <cstdint>
#include <string>

#include "metasim/crypto.hpp"

namespace metasim {

// 40 lowercase hex chars: first 20 bytes of SHA-256 over the wallet's root
// public key.
struct WalletAddress {
    std::string hex;
    auto operator<=>(const WalletAddress&) const = default;
    bool empty() const { return hex.empty(); }
};

// 64 lowercase hex chars: SHA-256 over canonical(owner, mint sequence).
struct NftId {
    std::string hex;
    auto operator<=>(const NftId&) const = default;
    bool empty() const { return hex.empty(); }
};

WalletAddress derive_address(const PublicKey& root_public);
NftId derive_nft_id(const WalletAddress& owner, std::uint64_t mint_seq);

// Display form used when no saved contact label exists.
std::string uuid_label(const NftId& id);

}  // namespace metasim
