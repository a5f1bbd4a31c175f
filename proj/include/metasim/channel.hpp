#pragma once

#include <cstdint>
#include <optional>

#include "metasim/credential.hpp"
#include "metasim/crypto.hpp"
#include "metasim/ids.hpp"
#include "metasim/ledger.hpp"
#include "metasim/wallet.hpp"

namespace metasim {

// Sent by the requester to the receiver. The requester signs every other
// field with its identity key.
struct ChannelRequest {
    NftId requester_nft;
    NftId receiver_nft;
    WalletAddress tp_id;
    AttestationCertificate cert;
    PublicKey requester_ephemeral_pub;
    std::uint32_t chosen_prekey_id = 0;
    Signature requester_signature;
    bool operator==(const ChannelRequest&) const = default;

    Bytes signing_payload() const;
    // The certificate travels as a nested length-prefixed blob, so damage to
    // it never disturbs the framing of the surrounding fields.
    Bytes encode() const;
    static ChannelRequest decode(ByteView data);
    // 16-byte identifier both endpoints derive from the signed request.
    Bytes channel_id() const;
};

// Per-peer session. session_key is never serialized.
struct ChannelState {
    Bytes channel_id;
    NftId self_nft;
    NftId peer_nft;
    SymmetricKey session_key;
    std::uint64_t send_counter = 0;
    std::uint64_t recv_counter = 0;
    std::uint64_t established_at = 0;
};

struct Envelope {
    Bytes channel_id;
    NftId sender_nft;
    std::uint64_t counter = 0;
    Bytes ciphertext;
    bool operator==(const Envelope&) const = default;

    // canonical(sender_nft, counter)
    Bytes aad() const;
    Bytes encode() const;
    static Envelope decode(ByteView data);
};

struct ChannelOpening {
    ChannelRequest request;
    ChannelState state;
};

// Requesting side. Steps, in order:
//   1. fetch receiver identity key and TP key from the ledger ("ledger-miss");
//   2. check the requester's own certificate against the TP key ("cert-invalid");
//   3. walk the receiver's bundle and take the first entry signed by the
//      receiver's identity key, provided that key carries a valid ledger
//      attestation from the same TP ("no-valid-prekey");
//   4. derive the ephemeral key from `ephemeral_seed`, run X3DH, sign the request.
// With no `tp`, the first held certificate names the TP.
ChannelOpening request_channel(const Wallet& requester, const NftId& receiver_nft,
                               const SignedPrekeyBundle& receiver_bundle, const Ledger& ledger,
                               ByteView ephemeral_seed, std::uint64_t now,
                               const std::optional<WalletAddress>& tp = std::nullopt);

// Same, fetching the receiver's bundle from the ledger.
ChannelOpening request_channel(const Wallet& requester, const NftId& receiver_nft,
                               const Ledger& ledger, ByteView ephemeral_seed, std::uint64_t now,
                               const std::optional<WalletAddress>& tp = std::nullopt);

// Replying side. Checks, in order: certificate against the TP key
// ("cert-invalid"), requester signature ("bad-request-signature"), addressee
// ("wrong-receiver"), referenced prekey ("unknown-prekey"); then X3DH.
ChannelState accept_channel(const Wallet& receiver, const ChannelRequest& request,
                            const Ledger& ledger, std::uint64_t now);

// Wire entry point: an undecodable certificate blob is "cert-invalid", any
// other framing damage is "malformed-request".
ChannelState accept_channel(const Wallet& receiver, ByteView request_bytes, const Ledger& ledger,
                            std::uint64_t now);

// Per-message key: kdf([session_key, sender_nft, counter], message_key_info).
SymmetricKey message_key(const CryptoProvider& crypto, const SymmetricKey& session_key,
                         const NftId& sender, std::uint64_t counter);

Envelope send_message(ChannelState& state, const CryptoProvider& crypto, ByteView plaintext);

// Errors: "wrong-channel", "replay" (counter <= recv_counter), "aead-auth-fail".
// State only advances on success.
Bytes receive_message(ChannelState& state, const CryptoProvider& crypto, const Envelope& env);

}  // namespace metasim
