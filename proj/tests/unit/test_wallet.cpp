#include <doctest.h>

#include <set>

#include "metasim/error.hpp"
#include "support.hpp"

using namespace metasim;
using namespace metasim::testing;

namespace {

std::string code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return "no-error";
}

}  // namespace

TEST_CASE("wallets are deterministic in their seed") {
    auto a = create_wallet(seed_from("a"));
    auto b = create_wallet(seed_from("a"));
    CHECK(a.address() == b.address());
    CHECK(a.address() == derive_address(a.identity_public()));
    CHECK(a.address().hex.size() == 40);
    CHECK(code_of([] { create_wallet(Bytes(31, 0)); }) == "bad-seed");
}

TEST_CASE("distinct seeds give distinct addresses") {
    std::set<WalletAddress> seen;
    for (std::uint64_t i = 0; i < 10000; ++i)
        seen.insert(create_wallet(seed_from("addr", i), test_provider()).address());
    CHECK(seen.size() == 10000);
}

TEST_CASE("public view carries no private key material") {
    for (const auto* c : {&default_provider(), &test_provider()}) {
        Ledger ledger(*c);
        auto tp = published_wallet(ledger, "tp");
        auto w = published_wallet(ledger, "holder", true);
        w.create_prekey_bundle(5);
        attest(tp, w, ledger, "age_over_18", false);

        auto view = w.public_view();
        CHECK_FALSE(contains_subsequence(view, w.identity_keypair().private_key.bytes));
        for (auto id : w.prekey_ids())
            CHECK_FALSE(contains_subsequence(view, w.prekey(id)->private_key.bytes));
        CHECK(contains_subsequence(view, w.identity_public().bytes));
    }
}

TEST_CASE("prekey bundles") {
    Ledger ledger(test_provider());
    auto w = published_wallet(ledger, "bundle-owner");
    CHECK(code_of([&] { w.create_prekey_bundle(3); }) == "no-identity-nft");
    w.mint(ledger);
    CHECK(code_of([&] { w.create_prekey_bundle(0); }) == "bad-count");
    CHECK(code_of([&] { w.create_prekey_bundle(101); }) == "bad-count");
    CHECK(w.create_prekey_bundle(100).entries.size() == 100);

    auto bundle = w.create_prekey_bundle(3);
    REQUIRE(bundle.entries.size() == 3);
    for (const auto& e : bundle.entries)
        CHECK(verify_prekey_entry(ledger.crypto(), e, w.nft_id(), w.identity_public()));
    CHECK(SignedPrekeyBundle::decode(bundle.encode()) == bundle);

    // Tamper one entry; the per-entry sweep must flag exactly that one.
    for (std::size_t victim = 0; victim < 3; ++victim) {
        auto tampered = bundle;
        tampered.entries[victim].prekey_pub = w.prekey(bundle.entries[(victim + 1) % 3].prekey_id)->public_key;
        for (std::size_t i = 0; i < 3; ++i)
            CHECK(verify_prekey_entry(ledger.crypto(), tampered.entries[i], w.nft_id(),
                                      w.identity_public()) == (i != victim));
    }
}

TEST_CASE("issued certificates verify and survive issuer key rotation") {
    Ledger ledger(default_provider());
    auto tp = published_wallet(ledger, "gov");
    auto holder = published_wallet(ledger, "citizen", true);

    auto cert = issue_attestation(tp, Claim{"age_over_18", holder.nft_id()}, ledger);
    CHECK(cert.issuer_id == tp.address());
    CHECK(ledger.verify_certificate(cert));
    CHECK(AttestationCertificate::decode(cert.encode()) == cert);
    CHECK(code_of([&] { issue_attestation(tp, Claim{"likes_cats", holder.nft_id()}, ledger); }) ==
          "unknown-predicate");

    PredicateRegistry extended;
    extended.add("likes_cats");
    CHECK(code_of([&] { issue_attestation(tp, Claim{"likes_cats", holder.nft_id()}, ledger, extended); }) ==
          "no-error");

    tp.rotate_identity_key(seed_from("gov-2"), ledger);
    tp.rotate_identity_key(seed_from("gov-3"), ledger);
    // Oracle: the key record in force at issued_at verifies the signature.
    auto pinned = ledger.key_record_at(tp.address(), cert.issued_at);
    REQUIRE(pinned);
    CHECK(ledger.crypto().verify(pinned->identity_pub, cert.signing_payload(), cert.signature));
    CHECK(ledger.verify_certificate(cert));

    // A certificate issued with the new key also verifies; the old key can no
    // longer issue.
    auto fresh = issue_attestation(tp, Claim{"kyc_verified", holder.nft_id()}, ledger);
    CHECK(ledger.verify_certificate(fresh));
    auto stale = Wallet::create(seed_from("gov"), ledger.crypto());
    CHECK(code_of([&] { issue_attestation(stale, Claim{"age_over_18", holder.nft_id()}, ledger); }) ==
          "unknown-wallet");
}

TEST_CASE("presentations bind a certificate to the live holder") {
    Ledger ledger(default_provider());
    auto tp = published_wallet(ledger, "tp");
    auto holder = published_wallet(ledger, "holder", true);
    auto thief = published_wallet(ledger, "thief", true);
    auto cert = attest(tp, holder, ledger, "age_over_18", false);

    auto p = make_presentation(holder, cert, 77);
    CHECK(Presentation::decode(p.encode()) == p);
    auto ok = verify_presentation(p, ledger, 77);
    CHECK(ok.ok);
    CHECK(ok.reason.empty());

    CHECK(verify_presentation(p, ledger, 78).reason == "nonce-mismatch");

    auto forged_cert = p;
    forged_cert.cert.issued_at += 1;
    CHECK(verify_presentation(forged_cert, ledger, 77).reason == "bad-cert-sig");

    auto bad_sig = p;
    bad_sig.holder_signature.bytes[0] ^= 1;
    CHECK(verify_presentation(bad_sig, ledger, 77).reason == "bad-holder-sig");

    // Cross-holder replay: the thief re-signs the holder's certificate.
    CHECK(code_of([&] { make_presentation(thief, cert, 77); }) == "not-holder");
    Presentation replay{cert, thief.nft_id(), 77, {}};
    replay.holder_signature = thief.sign(replay.signing_payload());
    auto r = verify_presentation(replay, ledger, 77);
    CHECK_FALSE(r.ok);
    CHECK(r.reason == "nft-mismatch");

    Presentation claimed{cert, holder.nft_id(), 77, {}};
    claimed.holder_signature = thief.sign(claimed.signing_payload());
    CHECK(verify_presentation(claimed, ledger, 77).reason == "bad-holder-sig");
}

TEST_CASE("presentation wire form holds only protocol fields") {
    Ledger ledger(default_provider());
    auto tp = published_wallet(ledger, "tp");
    auto holder = published_wallet(ledger, "holder", true);
    auto cert = attest(tp, holder, ledger, "age_over_18", false);
    auto p = make_presentation(holder, cert, 5);

    // Walk the encoding field by field; nothing may remain afterwards.
    auto wire = p.encode();
    Decoder d(wire);
    auto cert_blob = d.bytes();
    CHECK(d.str() == holder.nft_id().hex);
    CHECK(d.u64() == 5);
    CHECK(d.bytes() == p.holder_signature.bytes);
    CHECK(d.at_end());

    Decoder c(cert_blob);
    CHECK(c.str() == "age_over_18");
    CHECK(c.str() == holder.nft_id().hex);
    CHECK(c.str() == tp.address().hex);
    CHECK(c.u64() == cert.issued_at);
    CHECK(c.bytes() == cert.signature.bytes);
    CHECK(c.at_end());
}

TEST_CASE("certificates held by a wallet") {
    Ledger ledger(test_provider());
    auto tp1 = published_wallet(ledger, "tp1");
    auto tp2 = published_wallet(ledger, "tp2");
    auto h = published_wallet(ledger, "h", true);
    auto c1 = attest(tp1, h, ledger, "age_over_18", false);
    auto c2 = attest(tp2, h, ledger, "age_over_18", false);
    h.hold_certificate(c1);
    CHECK(h.certificates().size() == 2);
    CHECK(h.find_certificate("age_over_18") == c1);
    CHECK(h.find_certificate("age_over_18", {tp2.address()}) == c2);
    CHECK_FALSE(h.find_certificate("kyc_verified"));
}
