#include "metasim/ledger.hpp"

#include <mutex>
#include <sstream>

#include "metasim/canonical.hpp"
#include "metasim/error.hpp"

namespace metasim {

std::string_view to_string(EntryKind kind) {
    switch (kind) {
        case EntryKind::mint: return "mint";
        case EntryKind::key_record: return "key-record";
        case EntryKind::attestation: return "attestation";
        case EntryKind::prekey_bundle: return "prekey-bundle";
    }
    return "unknown";
}

std::optional<EntryKind> entry_kind_from(std::string_view name) {
    for (auto k : {EntryKind::mint, EntryKind::key_record, EntryKind::attestation,
                   EntryKind::prekey_bundle})
        if (to_string(k) == name)
            return k;
    return std::nullopt;
}

Bytes key_record_payload(const WalletAddress& wallet, const PublicKey& identity_pub) {
    return Encoder{}.str("metasim/key-record/v1").str(wallet.hex).bytes(identity_pub.bytes).take();
}

Bytes key_rotation_payload(const WalletAddress& wallet, const PublicKey& new_pub,
                           std::uint64_t replaced_seq) {
    return Encoder{}
            .str("metasim/key-rotation/v1")
            .str(wallet.hex)
            .bytes(new_pub.bytes)
            .u64(replaced_seq)
            .take();
}

namespace {

Bytes encode_key_record(const KeyRecord& r) {
    Encoder e;
    e.str(r.owner.hex).bytes(r.identity_pub.bytes).bytes(r.proof.bytes);
    e.u8(r.rotation_auth ? 1 : 0);
    if (r.rotation_auth)
        e.bytes(r.rotation_auth->bytes);
    return std::move(e).take();
}

Bytes encode_attestation(const AttestationRecord& r) {
    return Encoder{}.bytes(r.cert.encode()).str(r.issuer.hex).str(r.subject_nft.hex).take();
}

}  // namespace

void Ledger::set_observer(Observer observer) {
    std::unique_lock lock(mutex_);
    observer_ = std::move(observer);
}

// ---- writes -------------------------------------------------------------

std::uint64_t Ledger::publish_key_record(const WalletAddress& wallet, const PublicKey& identity_pub,
                                         const Signature& proof,
                                         const std::optional<Signature>& rotation_auth) {
    std::unique_lock lock(mutex_);
    notify(true, "publish-key-record", wallet.hex);
    return apply_key_record(wallet, identity_pub, proof, rotation_auth);
}

IdentityNft Ledger::mint_identity_nft(const WalletAddress& wallet) {
    std::unique_lock lock(mutex_);
    notify(true, "mint", wallet.hex);
    return apply_mint(wallet);
}

void Ledger::transfer_identity_nft(const NftId&, const WalletAddress&) {
    throw Error("soulbound-transfer-forbidden");
}

std::uint64_t Ledger::publish_attestation(const AttestationRecord& record) {
    std::unique_lock lock(mutex_);
    notify(true, "publish-attestation", record.subject_nft.hex);
    return apply_attestation(record);
}

std::uint64_t Ledger::publish_prekey_bundle(const SignedPrekeyBundle& bundle) {
    std::unique_lock lock(mutex_);
    notify(true, "publish-prekey-bundle", bundle.owner_nft.hex);
    return apply_prekey_bundle(bundle);
}

void Ledger::append(EntryKind kind, Bytes payload, std::uint64_t expected_seq) {
    log_.push_back(LogEntry{expected_seq, kind, std::move(payload)});
}

std::uint64_t Ledger::apply_key_record(const WalletAddress& wallet, const PublicKey& pub,
                                       const Signature& proof,
                                       const std::optional<Signature>& rotation_auth) {
    if (!crypto_->verify(pub, key_record_payload(wallet, pub), proof))
        throw Error("bad-self-attestation");

    const KeyRecord* current = latest_key_locked(wallet);
    if (current == nullptr) {
        if (derive_address(pub) != wallet)
            throw Error("bad-self-attestation", "key does not hash to wallet address");
        if (rotation_auth)
            throw Error("unauthorized-rotation", "first record carries a rotation authorization");
    } else {
        if (!rotation_auth ||
            !crypto_->verify(current->identity_pub,
                             key_rotation_payload(wallet, pub, current->published_at),
                             *rotation_auth))
            throw Error("unauthorized-rotation");
    }

    std::uint64_t seq = log_.size() + 1;
    KeyRecord record{wallet, pub, seq, proof, rotation_auth};
    append(EntryKind::key_record, encode_key_record(record), seq);
    keys_[wallet].push_back(std::move(record));
    return seq;
}

IdentityNft Ledger::apply_mint(const WalletAddress& wallet) {
    if (latest_key_locked(wallet) == nullptr)
        throw Error("unknown-wallet");
    if (nft_by_wallet_.count(wallet))
        throw Error("nft-exists");

    std::uint64_t seq = log_.size() + 1;
    IdentityNft nft{derive_nft_id(wallet, seq), wallet, seq};
    append(EntryKind::mint, Encoder{}.str(wallet.hex).str(nft.id.hex).take(), seq);
    nft_by_wallet_.emplace(wallet, nft.id);
    nfts_.emplace(nft.id, nft);
    return nft;
}

std::uint64_t Ledger::apply_attestation(const AttestationRecord& record) {
    if (!nfts_.count(record.subject_nft))
        throw Error("unknown-subject-nft");
    if (record.issuer != record.cert.issuer_id || record.subject_nft != record.cert.claim.subject_nft)
        throw Error("bad-issuer-signature", "record fields disagree with certificate");
    const KeyRecord* issuer_key = latest_key_locked(record.issuer);
    if (issuer_key == nullptr ||
        !crypto_->verify(issuer_key->identity_pub, record.cert.signing_payload(),
                         record.cert.signature))
        throw Error("bad-issuer-signature");

    std::uint64_t seq = log_.size() + 1;
    AttestationRecord stored = record;
    stored.published_at = seq;
    append(EntryKind::attestation, encode_attestation(stored), seq);
    attestations_[stored.subject_nft].push_back(std::move(stored));
    return seq;
}

std::uint64_t Ledger::apply_prekey_bundle(const SignedPrekeyBundle& bundle) {
    if (!nfts_.count(bundle.owner_nft))
        throw Error("unknown-subject-nft");
    if (bundle.entries.empty() || bundle.entries.size() > max_prekeys_per_bundle)
        throw Error("bad-count");
    std::uint64_t seq = log_.size() + 1;
    append(EntryKind::prekey_bundle, bundle.encode(), seq);
    bundles_[bundle.owner_nft] = bundle;
    return seq;
}

// ---- reads --------------------------------------------------------------

const KeyRecord* Ledger::latest_key_locked(const WalletAddress& wallet) const {
    auto it = keys_.find(wallet);
    if (it == keys_.end() || it->second.empty())
        return nullptr;
    return &it->second.back();
}

const KeyRecord* Ledger::key_at_locked(const WalletAddress& wallet, std::uint64_t seq) const {
    auto it = keys_.find(wallet);
    if (it == keys_.end())
        return nullptr;
    const KeyRecord* found = nullptr;
    for (const auto& r : it->second) {
        if (r.published_at > seq)
            break;
        found = &r;
    }
    return found;
}

bool Ledger::verify_certificate_locked(const AttestationCertificate& cert) const {
    const KeyRecord* key = key_at_locked(cert.issuer_id, cert.issued_at);
    return key != nullptr &&
           crypto_->verify(key->identity_pub, cert.signing_payload(), cert.signature);
}

KeyRecord Ledger::fetch_key_record(const WalletAddress& wallet) const {
    std::shared_lock lock(mutex_);
    notify(false, "fetch-key-record", wallet.hex);
    const KeyRecord* r = latest_key_locked(wallet);
    if (r == nullptr)
        throw Error("not-found", "no key record for " + wallet.hex);
    return *r;
}

std::optional<KeyRecord> Ledger::key_record_at(const WalletAddress& wallet,
                                               std::uint64_t seq) const {
    std::shared_lock lock(mutex_);
    notify(false, "fetch-key-record-at", wallet.hex);
    const KeyRecord* r = key_at_locked(wallet, seq);
    if (r == nullptr)
        return std::nullopt;
    return *r;
}

std::vector<KeyRecord> Ledger::key_history(const WalletAddress& wallet) const {
    std::shared_lock lock(mutex_);
    notify(false, "fetch-key-history", wallet.hex);
    auto it = keys_.find(wallet);
    return it == keys_.end() ? std::vector<KeyRecord>{} : it->second;
}

IdentityNft Ledger::resolve_nft(const NftId& nft) const {
    std::shared_lock lock(mutex_);
    notify(false, "resolve-nft", nft.hex);
    auto it = nfts_.find(nft);
    if (it == nfts_.end())
        throw Error("not-found", "no nft " + nft.hex);
    return it->second;
}

std::optional<IdentityNft> Ledger::nft_of(const WalletAddress& wallet) const {
    std::shared_lock lock(mutex_);
    notify(false, "nft-of", wallet.hex);
    auto it = nft_by_wallet_.find(wallet);
    if (it == nft_by_wallet_.end())
        return std::nullopt;
    return nfts_.at(it->second);
}

std::vector<AttestationRecord> Ledger::fetch_attestations(const NftId& nft) const {
    std::shared_lock lock(mutex_);
    notify(false, "fetch-attestations", nft.hex);
    auto it = attestations_.find(nft);
    return it == attestations_.end() ? std::vector<AttestationRecord>{} : it->second;
}

SignedPrekeyBundle Ledger::fetch_prekey_bundle(const NftId& nft) const {
    std::shared_lock lock(mutex_);
    notify(false, "fetch-prekey-bundle", nft.hex);
    auto it = bundles_.find(nft);
    if (it == bundles_.end())
        throw Error("not-found", "no prekey bundle for " + nft.hex);
    return it->second;
}

PublicKey Ledger::identity_key_of(const NftId& nft) const {
    std::shared_lock lock(mutex_);
    notify(false, "fetch-identity-key", nft.hex);
    auto it = nfts_.find(nft);
    if (it == nfts_.end())
        throw Error("not-found", "no nft " + nft.hex);
    const KeyRecord* r = latest_key_locked(it->second.owner);
    if (r == nullptr)
        throw Error("not-found", "no key record for nft owner");
    return r->identity_pub;
}

bool Ledger::verify_certificate(const AttestationCertificate& cert) const {
    std::shared_lock lock(mutex_);
    notify(false, "fetch-issuer-key", cert.issuer_id.hex);
    return verify_certificate_locked(cert);
}

std::uint64_t Ledger::head() const {
    std::shared_lock lock(mutex_);
    notify(false, "head", "");
    return log_.size();
}

std::size_t Ledger::nft_count() const {
    std::shared_lock lock(mutex_);
    return nfts_.size();
}

std::vector<LogEntry> Ledger::entries() const {
    std::shared_lock lock(mutex_);
    return log_;
}

// ---- persistence --------------------------------------------------------

std::string Ledger::serialize() const {
    std::shared_lock lock(mutex_);
    std::string out;
    for (const auto& e : log_) {
        out += std::to_string(e.seq);
        out += '|';
        out += to_string(e.kind);
        out += '|';
        out += to_hex(e.payload);
        out += '\n';
    }
    return out;
}

void Ledger::apply(const LogEntry& entry) {
    Decoder d(entry.payload);
    switch (entry.kind) {
        case EntryKind::key_record: {
            WalletAddress wallet{d.str()};
            PublicKey pub{d.bytes()};
            Signature proof{d.bytes()};
            std::optional<Signature> rotation;
            if (d.flag())
                rotation = Signature{d.bytes()};
            d.expect_end();
            apply_key_record(wallet, pub, proof, rotation);
            break;
        }
        case EntryKind::mint: {
            WalletAddress wallet{d.str()};
            NftId claimed{d.str()};
            d.expect_end();
            if (apply_mint(wallet).id != claimed)
                throw Error("bad-log", "nft id does not match mint sequence");
            break;
        }
        case EntryKind::attestation: {
            auto cert = AttestationCertificate::decode(d.bytes());
            WalletAddress issuer{d.str()};
            NftId subject{d.str()};
            d.expect_end();
            apply_attestation(AttestationRecord{cert, issuer, subject, 0});
            break;
        }
        case EntryKind::prekey_bundle:
            apply_prekey_bundle(SignedPrekeyBundle::decode(entry.payload));
            break;
    }
    if (log_.back().payload != entry.payload)
        throw Error("bad-log", "payload is not in canonical form");
}

void Ledger::load(std::string_view text) {
    std::unique_lock lock(mutex_);
    if (!log_.empty())
        throw Error("bad-log", "load requires an empty ledger");

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos)
            end = text.size();
        auto line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (line.empty())
            continue;

        auto where = "line " + std::to_string(line_no);
        auto bar1 = line.find('|');
        auto bar2 = bar1 == std::string_view::npos ? bar1 : line.find('|', bar1 + 1);
        if (bar2 == std::string_view::npos)
            throw Error("bad-log", where + ": expected seq|kind|payload-hex");

        LogEntry entry;
        try {
            entry.seq = std::stoull(std::string(line.substr(0, bar1)));
        } catch (const std::exception&) {
            throw Error("bad-log", where + ": bad sequence number");
        }
        auto kind = entry_kind_from(line.substr(bar1 + 1, bar2 - bar1 - 1));
        if (!kind)
            throw Error("bad-log", where + ": unknown entry kind");
        entry.kind = *kind;
        if (entry.seq != log_.size() + 1)
            throw Error("bad-log", where + ": sequence gap");

        try {
            entry.payload = from_hex(line.substr(bar2 + 1));
            apply(entry);
        } catch (const Error& e) {
            if (e.code() == "bad-log")
                throw;
            throw Error("bad-log", where + ": " + e.what());
        }
    }
}

Bytes Ledger::index_digest() const {
    std::shared_lock lock(mutex_);
    Encoder e;
    e.u64(log_.size());
    e.u32(static_cast<std::uint32_t>(keys_.size()));
    for (const auto& [wallet, records] : keys_) {
        e.str(wallet.hex).u32(static_cast<std::uint32_t>(records.size()));
        for (const auto& r : records)
            e.bytes(encode_key_record(r)).u64(r.published_at);
    }
    e.u32(static_cast<std::uint32_t>(nfts_.size()));
    for (const auto& [id, nft] : nfts_)
        e.str(id.hex).str(nft.owner.hex).u64(nft.minted_at);
    e.u32(static_cast<std::uint32_t>(nft_by_wallet_.size()));
    for (const auto& [wallet, id] : nft_by_wallet_)
        e.str(wallet.hex).str(id.hex);
    e.u32(static_cast<std::uint32_t>(attestations_.size()));
    for (const auto& [id, records] : attestations_) {
        e.str(id.hex).u32(static_cast<std::uint32_t>(records.size()));
        for (const auto& r : records)
            e.bytes(encode_attestation(r)).u64(r.published_at);
    }
    e.u32(static_cast<std::uint32_t>(bundles_.size()));
    for (const auto& [id, bundle] : bundles_)
        e.str(id.hex).bytes(bundle.encode());
    return sha256(e.data());
}

}  // namespace metasim
