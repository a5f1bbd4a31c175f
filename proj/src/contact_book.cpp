#include "metasim/contact_book.hpp"

#include "metasim/canonical.hpp"

namespace metasim {

namespace {

void write_appearance(Encoder& e, const AppearanceMap& appearance) {
    e.u32(static_cast<std::uint32_t>(appearance.size()));
    for (const auto& [k, v] : appearance)
        e.str(k).str(v);
}

AppearanceMap read_appearance(Decoder& d) {
    AppearanceMap out;
    auto n = d.u32();
    for (std::uint32_t i = 0; i < n; ++i) {
        auto k = d.str();
        out[k] = d.str();
    }
    return out;
}

}  // namespace

Bytes encode_appearance(const AppearanceMap& appearance) {
    Encoder e;
    write_appearance(e, appearance);
    return std::move(e).take();
}

Bytes AvatarProfile::encode() const {
    Encoder e;
    e.str(nft_id.hex).str(display_name);
    write_appearance(e, appearance);
    e.str(voice_tag);
    return std::move(e).take();
}

AvatarProfile AvatarProfile::decode(ByteView data) {
    Decoder d(data);
    AvatarProfile p;
    p.nft_id.hex = d.str();
    p.display_name = d.str();
    p.appearance = read_appearance(d);
    p.voice_tag = d.str();
    d.expect_end();
    return p;
}

std::string ContactEntry::display_label() const {
    return saved_label.empty() ? uuid_label(nft_id) : saved_label;
}

const ContactEntry* ContactBook::find(const NftId& nft) const {
    auto it = entries_.find(nft);
    return it == entries_.end() ? nullptr : &it->second;
}

ContactEntry* ContactBook::find(const NftId& nft) {
    auto it = entries_.find(nft);
    return it == entries_.end() ? nullptr : &it->second;
}

ContactEntry& ContactBook::upsert(const NftId& nft, std::string label, std::uint64_t now,
                                  const AppearanceMap& seen) {
    auto [it, inserted] = entries_.try_emplace(nft);
    auto& entry = it->second;
    if (inserted) {
        entry.nft_id = nft;
        entry.saved_label = std::move(label);
        entry.first_met = now;
    }
    entry.last_seen_appearance = seen;
    return entry;
}

Bytes ContactBook::encode() const {
    Encoder e;
    e.u32(static_cast<std::uint32_t>(entries_.size()));
    for (const auto& [id, entry] : entries_) {
        e.str(id.hex).str(entry.saved_label).u64(entry.first_met);
        e.u32(static_cast<std::uint32_t>(entry.endorsements.size()));
        for (const auto& en : entry.endorsements)
            e.str(en.endorser_nft.hex).bytes(en.signature.bytes);
        write_appearance(e, entry.last_seen_appearance);
    }
    return std::move(e).take();
}

ContactBook ContactBook::decode(ByteView data) {
    Decoder d(data);
    ContactBook book;
    auto n = d.u32();
    for (std::uint32_t i = 0; i < n; ++i) {
        ContactEntry entry;
        entry.nft_id.hex = d.str();
        entry.saved_label = d.str();
        entry.first_met = d.u64();
        auto m = d.u32();
        for (std::uint32_t j = 0; j < m; ++j) {
            Endorsement en;
            en.endorser_nft.hex = d.str();
            en.signature.bytes = d.bytes();
            entry.endorsements.push_back(std::move(en));
        }
        entry.last_seen_appearance = read_appearance(d);
        auto id = entry.nft_id;
        book.entries_.emplace(std::move(id), std::move(entry));
    }
    d.expect_end();
    return book;
}

}  // namespace metasim
