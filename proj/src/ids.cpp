#include "metasim/ids.hpp"

#include "metasim/canonical.hpp"

namespace metasim {

WalletAddress derive_address(const PublicKey& root_public) {
    auto digest = sha256(root_public.bytes);
    return {to_hex(ByteView(digest).first(20))};
}

NftId derive_nft_id(const WalletAddress& owner, std::uint64_t mint_seq) {
    return {to_hex(sha256(Encoder{}.str(owner.hex).u64(mint_seq).data()))};
}

std::string uuid_label(const NftId& id) {
    return id.hex.substr(0, 8);
}

}  // namespace metasim
