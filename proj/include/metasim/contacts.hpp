#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "metasim/contact_book.hpp"
#include "metasim/ledger.hpp"
#include "metasim/wallet.hpp"

namespace metasim {

// Signed answer to a peer's nonce proving control of the key bound to `nft_id`.
struct BindingProof {
    NftId nft_id;
    std::uint64_t nonce = 0;
    Signature signature;
    bool operator==(const BindingProof&) const = default;

    Bytes encode() const;
    static BindingProof decode(ByteView data);
};

Bytes binding_payload(const NftId& nft, std::uint64_t nonce);

BindingProof prove_binding(const Wallet& wallet, std::uint64_t nonce);
bool verify_binding(const BindingProof& proof, std::uint64_t expected_nonce, const Ledger& ledger);

// Adds (or refreshes) a contact after checking the peer's binding proof.
// Error "binding-proof-failed".
const ContactEntry& accept_contact(ContactBook& book, const BindingProof& proof,
                                   std::uint64_t expected_nonce, const Ledger& ledger,
                                   const AppearanceMap& seen, std::string label,
                                   std::uint64_t now);

struct ContactPeer {
    Wallet* wallet;
    const AvatarProfile* avatar;
    std::string label_for_other;  // name this party saves the other under
    std::uint64_t nonce_for_other;  // nonce this party challenges the other with
};

// Mutual exchange: each side challenges the other, verifies the proof against
// the ledger, then saves the other's entry. Both books change only when both
// proofs verify. Repeating an exchange keeps first_met.
void exchange_contacts(ContactPeer a, ContactPeer b, const Ledger& ledger, std::uint64_t now);

Bytes endorsement_payload(const NftId& endorser, const NftId& subject, const NftId& target);

// `endorser` vouches for `subject` inside `target`'s book. Requires the
// endorser to know both and the target to already hold an entry for the
// subject; endorsements never create contacts. Error "not-mutual-contact".
const ContactEntry& endorse_contact(const Wallet& endorser, const NftId& subject_nft,
                                    Wallet& target, const Ledger& ledger);

bool verify_endorsement(const Endorsement& e, const NftId& subject, const NftId& book_owner,
                        const Ledger& ledger);
std::size_t valid_endorsement_count(const ContactEntry& entry, const NftId& book_owner,
                                    const Ledger& ledger);

enum class Verdict { known, unknown, impersonation_warning };
std::string_view to_string(Verdict v);

struct RecognitionResult {
    Verdict verdict = Verdict::unknown;
    std::string label;
    // Contact whose appearance was copied, for warnings.
    std::optional<NftId> impersonated;
};

// Decides from the proven nft alone; appearance is consulted only to flag a
// clone (exact attribute-map match with a saved contact under another nft).
RecognitionResult recognize_avatar(const ContactBook& book, const AvatarProfile& encountered,
                                   const std::optional<BindingProof>& proof,
                                   std::uint64_t expected_nonce, const Ledger& ledger);

}  // namespace metasim
