#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "metasim/crypto.hpp"
#include "metasim/ids.hpp"

namespace metasim {

// Opaque, data-only appearance attributes (skin, clothing, ...). Never
// consulted for identity decisions other than collision detection.
using AppearanceMap = std::map<std::string, std::string>;

struct AvatarProfile {
    NftId nft_id;
    std::string display_name;
    AppearanceMap appearance;
    std::string voice_tag;
    bool operator==(const AvatarProfile&) const = default;

    Bytes encode() const;
    static AvatarProfile decode(ByteView data);
};

Bytes encode_appearance(const AppearanceMap& appearance);

struct Endorsement {
    NftId endorser_nft;
    Signature signature;
    bool operator==(const Endorsement&) const = default;
};

struct ContactEntry {
    NftId nft_id;
    std::string saved_label;
    std::vector<Endorsement> endorsements;
    std::uint64_t first_met = 0;
    // Appearance observed at the last verified meeting; used only to spot clones.
    AppearanceMap last_seen_appearance;
    bool operator==(const ContactEntry&) const = default;

    // saved_label when set, otherwise the short UUID rendering of the nft.
    std::string display_label() const;
};

class ContactBook {
  public:
    const ContactEntry* find(const NftId& nft) const;
    ContactEntry* find(const NftId& nft);
    bool contains(const NftId& nft) const { return find(nft) != nullptr; }

    // Inserts a new entry, or refreshes appearance on an existing one while
    // keeping first_met, label and endorsements.
    ContactEntry& upsert(const NftId& nft, std::string label, std::uint64_t now,
                         const AppearanceMap& seen);

    const std::map<NftId, ContactEntry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }

    Bytes encode() const;
    static ContactBook decode(ByteView data);

    bool operator==(const ContactBook&) const = default;

  private:
    std::map<NftId, ContactEntry> entries_;
};

}  // namespace metasim
