#include "metasim/contacts.hpp"

#include "metasim/canonical.hpp"
#include "metasim/error.hpp"

namespace metasim {

Bytes BindingProof::encode() const {
    return Encoder{}.str(nft_id.hex).u64(nonce).bytes(signature.bytes).take();
}

BindingProof BindingProof::decode(ByteView data) {
    Decoder d(data);
    BindingProof p;
    p.nft_id.hex = d.str();
    p.nonce = d.u64();
    p.signature.bytes = d.bytes();
    d.expect_end();
    return p;
}

Bytes binding_payload(const NftId& nft, std::uint64_t nonce) {
    return Encoder{}.str("metasim/contact-binding/v1").str(nft.hex).u64(nonce).take();
}

BindingProof prove_binding(const Wallet& wallet, std::uint64_t nonce) {
    const auto& nft = wallet.nft_id();
    return {nft, nonce, wallet.sign(binding_payload(nft, nonce))};
}

bool verify_binding(const BindingProof& proof, std::uint64_t expected_nonce, const Ledger& ledger) {
    if (proof.nonce != expected_nonce)
        return false;
    try {
        return ledger.crypto().verify(ledger.identity_key_of(proof.nft_id),
                                      binding_payload(proof.nft_id, proof.nonce), proof.signature);
    } catch (const Error&) {
        return false;
    }
}

const ContactEntry& accept_contact(ContactBook& book, const BindingProof& proof,
                                   std::uint64_t expected_nonce, const Ledger& ledger,
                                   const AppearanceMap& seen, std::string label,
                                   std::uint64_t now) {
    if (!verify_binding(proof, expected_nonce, ledger))
        throw Error("binding-proof-failed");
    return book.upsert(proof.nft_id, std::move(label), now, seen);
}

void exchange_contacts(ContactPeer a, ContactPeer b, const Ledger& ledger, std::uint64_t now) {
    auto proof_from_b = prove_binding(*b.wallet, a.nonce_for_other);
    auto proof_from_a = prove_binding(*a.wallet, b.nonce_for_other);
    if (!verify_binding(proof_from_b, a.nonce_for_other, ledger) ||
        proof_from_b.nft_id != b.avatar->nft_id ||
        !verify_binding(proof_from_a, b.nonce_for_other, ledger) ||
        proof_from_a.nft_id != a.avatar->nft_id)
        throw Error("binding-proof-failed");

    a.wallet->contacts().upsert(proof_from_b.nft_id, a.label_for_other, now, b.avatar->appearance);
    b.wallet->contacts().upsert(proof_from_a.nft_id, b.label_for_other, now, a.avatar->appearance);
}

Bytes endorsement_payload(const NftId& endorser, const NftId& subject, const NftId& target) {
    return Encoder{}
            .str("metasim/endorsement/v1")
            .str(endorser.hex)
            .str(subject.hex)
            .str(target.hex)
            .take();
}

const ContactEntry& endorse_contact(const Wallet& endorser, const NftId& subject_nft,
                                    Wallet& target, const Ledger&) {
    const auto& target_nft = target.nft_id();
    const auto& endorser_nft = endorser.nft_id();
    if (!endorser.contacts().contains(subject_nft) || !endorser.contacts().contains(target_nft))
        throw Error("not-mutual-contact");
    ContactEntry* entry = target.contacts().find(subject_nft);
    if (entry == nullptr)
        throw Error("not-mutual-contact", "target has no entry for the subject");

    Endorsement e{endorser_nft,
                  endorser.sign(endorsement_payload(endorser_nft, subject_nft, target_nft))};
    for (auto& existing : entry->endorsements) {
        if (existing.endorser_nft == endorser_nft) {
            existing = std::move(e);
            return *entry;
        }
    }
    entry->endorsements.push_back(std::move(e));
    return *entry;
}

bool verify_endorsement(const Endorsement& e, const NftId& subject, const NftId& book_owner,
                        const Ledger& ledger) {
    try {
        return ledger.crypto().verify(ledger.identity_key_of(e.endorser_nft),
                                      endorsement_payload(e.endorser_nft, subject, book_owner),
                                      e.signature);
    } catch (const Error&) {
        return false;
    }
}

std::size_t valid_endorsement_count(const ContactEntry& entry, const NftId& book_owner,
                                    const Ledger& ledger) {
    std::size_t n = 0;
    for (const auto& e : entry.endorsements)
        if (verify_endorsement(e, entry.nft_id, book_owner, ledger))
            ++n;
    return n;
}

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::known: return "known";
        case Verdict::unknown: return "unknown";
        case Verdict::impersonation_warning: return "IMPERSONATION_WARNING";
    }
    return "unknown";
}

RecognitionResult recognize_avatar(const ContactBook& book, const AvatarProfile& encountered,
                                   const std::optional<BindingProof>& proof,
                                   std::uint64_t expected_nonce, const Ledger& ledger) {
    const bool proven = proof && proof->nft_id == encountered.nft_id &&
                        verify_binding(*proof, expected_nonce, ledger);

    if (proven) {
        if (const auto* entry = book.find(encountered.nft_id))
            return {Verdict::known, entry->display_label(), std::nullopt};
    }

    for (const auto& [id, entry] : book.entries()) {
        if (!entry.last_seen_appearance.empty() &&
            entry.last_seen_appearance == encountered.appearance)
            return {Verdict::impersonation_warning, uuid_label(encountered.nft_id), id};
    }
    return {Verdict::unknown, uuid_label(encountered.nft_id), std::nullopt};
}

}  // namespace metasim
