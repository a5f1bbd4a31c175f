#include "metasim/channel.hpp"

#include <limits>

#include "metasim/canonical.hpp"
#include "metasim/error.hpp"

namespace metasim {

Bytes ChannelRequest::signing_payload() const {
    return Encoder{}
            .str("metasim/channel-request/v1")
            .str(requester_nft.hex)
            .str(receiver_nft.hex)
            .str(tp_id.hex)
            .bytes(cert.encode())
            .bytes(requester_ephemeral_pub.bytes)
            .u32(chosen_prekey_id)
            .take();
}

Bytes ChannelRequest::encode() const {
    return Encoder{}
            .str(requester_nft.hex)
            .str(receiver_nft.hex)
            .str(tp_id.hex)
            .bytes(cert.encode())
            .bytes(requester_ephemeral_pub.bytes)
            .u32(chosen_prekey_id)
            .bytes(requester_signature.bytes)
            .take();
}

namespace {

struct DecodedRequest {
    ChannelRequest request;
    bool cert_ok = false;
};

DecodedRequest decode_request(ByteView data) {
    Decoder d(data);
    DecodedRequest out;
    auto& r = out.request;
    r.requester_nft.hex = d.str();
    r.receiver_nft.hex = d.str();
    r.tp_id.hex = d.str();
    auto cert_blob = d.bytes();
    r.requester_ephemeral_pub.bytes = d.bytes();
    r.chosen_prekey_id = d.u32();
    r.requester_signature.bytes = d.bytes();
    d.expect_end();
    try {
        r.cert = AttestationCertificate::decode(cert_blob);
        out.cert_ok = true;
    } catch (const Error&) {
    }
    return out;
}

// A certificate is valid for a request when it names the requester as subject,
// was issued by the named TP, and verifies under the TP key pinned at issue.
bool certificate_valid_for(const Ledger& ledger, const AttestationCertificate& cert,
                           const NftId& subject, const WalletAddress& tp) {
    return cert.issuer_id == tp && cert.claim.subject_nft == subject &&
           ledger.verify_certificate(cert);
}

bool identity_attested_by(const Ledger& ledger, const NftId& nft, const WalletAddress& tp) {
    for (const auto& record : ledger.fetch_attestations(nft))
        if (certificate_valid_for(ledger, record.cert, nft, tp))
            return true;
    return false;
}

}  // namespace

ChannelRequest ChannelRequest::decode(ByteView data) {
    auto decoded = decode_request(data);
    if (!decoded.cert_ok)
        throw Error("decode-error", "bad certificate blob");
    return decoded.request;
}

Bytes ChannelRequest::channel_id() const {
    auto digest = sha256(Encoder{}.str("metasim/channel-id/v1").bytes(encode()).data());
    return Bytes(digest.begin(), digest.begin() + 16);
}

ChannelOpening request_channel(const Wallet& requester, const NftId& receiver_nft,
                               const SignedPrekeyBundle& receiver_bundle, const Ledger& ledger,
                               ByteView ephemeral_seed, std::uint64_t now,
                               const std::optional<WalletAddress>& tp) {
    const auto& crypto = requester.crypto();
    const NftId& requester_nft = requester.nft_id();

    const AttestationCertificate* cert = nullptr;
    for (const auto& c : requester.certificates()) {
        if (!tp || c.issuer_id == *tp) {
            cert = &c;
            break;
        }
    }
    if (cert == nullptr)
        throw Error("cert-invalid", "no certificate from the requested trusted party");
    const WalletAddress tp_id = cert->issuer_id;

    PublicKey receiver_identity;
    try {
        receiver_identity = ledger.identity_key_of(receiver_nft);
        ledger.fetch_key_record(tp_id);
    } catch (const Error& e) {
        throw Error("ledger-miss", e.what());
    }

    if (!certificate_valid_for(ledger, *cert, requester_nft, tp_id))
        throw Error("cert-invalid");

    const PrekeyEntry* chosen = nullptr;
    if (receiver_bundle.owner_nft == receiver_nft && identity_attested_by(ledger, receiver_nft, tp_id)) {
        for (const auto& entry : receiver_bundle.entries) {
            if (verify_prekey_entry(crypto, entry, receiver_nft, receiver_identity)) {
                chosen = &entry;
                break;
            }
        }
    }
    if (chosen == nullptr)
        throw Error("no-valid-prekey");

    auto ephemeral = crypto.generate_keypair(ephemeral_seed);
    auto secret = x3dh_initiator(crypto, requester.identity_keypair(), ephemeral, receiver_identity,
                                 chosen->prekey_pub);

    ChannelOpening out;
    auto& req = out.request;
    req.requester_nft = requester_nft;
    req.receiver_nft = receiver_nft;
    req.tp_id = tp_id;
    req.cert = *cert;
    req.requester_ephemeral_pub = ephemeral.public_key;
    req.chosen_prekey_id = chosen->prekey_id;
    req.requester_signature = requester.sign(req.signing_payload());

    out.state.channel_id = req.channel_id();
    out.state.self_nft = requester_nft;
    out.state.peer_nft = receiver_nft;
    out.state.session_key = SymmetricKey::from(secret.bytes);
    out.state.established_at = now;
    return out;
}

ChannelOpening request_channel(const Wallet& requester, const NftId& receiver_nft,
                               const Ledger& ledger, ByteView ephemeral_seed, std::uint64_t now,
                               const std::optional<WalletAddress>& tp) {
    SignedPrekeyBundle bundle;
    try {
        bundle = ledger.fetch_prekey_bundle(receiver_nft);
    } catch (const Error& e) {
        throw Error("ledger-miss", e.what());
    }
    return request_channel(requester, receiver_nft, bundle, ledger, ephemeral_seed, now, tp);
}

ChannelState accept_channel(const Wallet& receiver, const ChannelRequest& request,
                            const Ledger& ledger, std::uint64_t now) {
    const auto& crypto = receiver.crypto();

    if (!certificate_valid_for(ledger, request.cert, request.requester_nft, request.tp_id))
        throw Error("cert-invalid");

    PublicKey requester_identity;
    try {
        requester_identity = ledger.identity_key_of(request.requester_nft);
    } catch (const Error& e) {
        throw Error("ledger-miss", e.what());
    }
    if (!crypto.verify(requester_identity, request.signing_payload(), request.requester_signature))
        throw Error("bad-request-signature");
    if (!receiver.nft() || receiver.nft()->id != request.receiver_nft)
        throw Error("wrong-receiver");

    const KeyPair* prekey = receiver.prekey(request.chosen_prekey_id);
    if (prekey == nullptr)
        throw Error("unknown-prekey");

    auto secret = x3dh_responder(crypto, receiver.identity_keypair(), *prekey, requester_identity,
                                 request.requester_ephemeral_pub);

    ChannelState state;
    state.channel_id = request.channel_id();
    state.self_nft = request.receiver_nft;
    state.peer_nft = request.requester_nft;
    state.session_key = SymmetricKey::from(secret.bytes);
    state.established_at = now;
    return state;
}

ChannelState accept_channel(const Wallet& receiver, ByteView request_bytes, const Ledger& ledger,
                            std::uint64_t now) {
    DecodedRequest decoded;
    try {
        decoded = decode_request(request_bytes);
    } catch (const Error& e) {
        throw Error("malformed-request", e.what());
    }
    if (!decoded.cert_ok)
        throw Error("cert-invalid", "certificate does not decode");
    return accept_channel(receiver, decoded.request, ledger, now);
}

Bytes Envelope::aad() const {
    return Encoder{}.str(sender_nft.hex).u64(counter).take();
}

Bytes Envelope::encode() const {
    return Encoder{}.bytes(channel_id).str(sender_nft.hex).u64(counter).bytes(ciphertext).take();
}

Envelope Envelope::decode(ByteView data) {
    Decoder d(data);
    Envelope env;
    env.channel_id = d.bytes();
    env.sender_nft.hex = d.str();
    env.counter = d.u64();
    env.ciphertext = d.bytes();
    d.expect_end();
    return env;
}

SymmetricKey message_key(const CryptoProvider& crypto, const SymmetricKey& session_key,
                         const NftId& sender, std::uint64_t counter) {
    const Bytes inputs[] = {
            Bytes(session_key.bytes.begin(), session_key.bytes.end()),
            to_bytes(sender.hex),
            Encoder{}.u64(counter).take(),
    };
    return SymmetricKey::from(crypto.kdf(inputs, message_key_info, symmetric_key_size));
}

Envelope send_message(ChannelState& state, const CryptoProvider& crypto, ByteView plaintext) {
    if (state.send_counter == std::numeric_limits<std::uint64_t>::max())
        throw Error("counter-exhausted");
    Envelope env;
    env.channel_id = state.channel_id;
    env.sender_nft = state.self_nft;
    env.counter = state.send_counter + 1;
    auto key = message_key(crypto, state.session_key, env.sender_nft, env.counter);
    env.ciphertext = crypto.aead_seal(key, counter_nonce(env.counter), plaintext, env.aad());
    state.send_counter = env.counter;
    return env;
}

Bytes receive_message(ChannelState& state, const CryptoProvider& crypto, const Envelope& env) {
    if (env.channel_id != state.channel_id || env.sender_nft != state.peer_nft)
        throw Error("wrong-channel");
    if (env.counter <= state.recv_counter)
        throw Error("replay");
    auto key = message_key(crypto, state.session_key, env.sender_nft, env.counter);
    auto plaintext = crypto.aead_open(key, counter_nonce(env.counter), env.ciphertext, env.aad());
    state.recv_counter = env.counter;
    return plaintext;
}

}  // namespace metasim
