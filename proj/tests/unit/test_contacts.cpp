#include <doctest.h>

#include "metasim/contacts.hpp"
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

struct Person {
    Wallet wallet;
    AvatarProfile avatar;
};

Person person(Ledger& ledger, const std::string& name, AppearanceMap look) {
    auto w = published_wallet(ledger, name, true);
    AvatarProfile avatar{w.nft_id(), name, std::move(look), name + "-voice"};
    return {std::move(w), std::move(avatar)};
}

void exchange(Person& a, Person& b, Ledger& ledger, std::uint64_t now, std::string la = "",
              std::string lb = "") {
    exchange_contacts({&a.wallet, &a.avatar, std::move(la), 11}, {&b.wallet, &b.avatar, std::move(lb), 22},
                      ledger, now);
}

RecognitionResult meet(const Person& observer, const Person& subject, const Ledger& ledger,
                       std::uint64_t nonce = 5) {
    return recognize_avatar(observer.wallet.contacts(), subject.avatar, prove_binding(subject.wallet, nonce),
                            nonce, ledger);
}

AppearanceMap random_look(std::mt19937_64& rng) {
    AppearanceMap m;
    auto n = 1 + rng() % 5;
    for (std::size_t i = 0; i < n; ++i)
        m["attr" + std::to_string(rng() % 10)] = to_hex(random_bytes(rng, 4));
    return m;
}

}  // namespace

TEST_CASE("contact exchange saves verified nft bindings") {
    Ledger ledger(default_provider());
    auto a = person(ledger, "ann", {{"hair", "red"}});
    auto b = person(ledger, "ben", {{"hair", "blue"}});
    exchange(a, b, ledger, 10, "Ben", "Ann");

    const auto* ab = a.wallet.contacts().find(b.wallet.nft_id());
    const auto* ba = b.wallet.contacts().find(a.wallet.nft_id());
    REQUIRE(ab);
    REQUIRE(ba);
    CHECK(ab->saved_label == "Ben");
    CHECK(ba->display_label() == "Ann");
    CHECK(ab->first_met == 10);
    CHECK(ab->last_seen_appearance == b.avatar.appearance);

    // Repeating the exchange changes nothing but refreshes what was seen.
    auto before_a = a.wallet.contacts();
    auto before_b = b.wallet.contacts();
    exchange(a, b, ledger, 50, "Ben", "Ann");
    CHECK(a.wallet.contacts() == before_a);
    CHECK(b.wallet.contacts() == before_b);

    CHECK(ContactBook::decode(a.wallet.contacts().encode()) == a.wallet.contacts());
}

TEST_CASE("a party that cannot sign for its nft fails the binding proof") {
    Ledger ledger(default_provider());
    auto a = person(ledger, "ann", {{"hair", "red"}});
    auto b = person(ledger, "ben", {{"hair", "blue"}});
    auto c = person(ledger, "cat", {{"hair", "green"}});
    b.avatar.nft_id = c.wallet.nft_id();  // ben claims cat's nft
    CHECK(code_of([&] { exchange(a, b, ledger, 1); }) == "binding-proof-failed");
    CHECK(a.wallet.contacts().size() == 0);
    CHECK(b.wallet.contacts().size() == 0);

    BindingProof forged{c.wallet.nft_id(), 9, b.wallet.sign(binding_payload(c.wallet.nft_id(), 9))};
    CHECK_FALSE(verify_binding(forged, 9, ledger));
    CHECK(code_of([&] { accept_contact(a.wallet.contacts(), forged, 9, ledger, {}, "x", 1); }) ==
          "binding-proof-failed");
    auto honest = prove_binding(c.wallet, 9);
    CHECK(BindingProof::decode(honest.encode()) == honest);
    CHECK(code_of([&] { accept_contact(a.wallet.contacts(), honest, 10, ledger, {}, "x", 1); }) ==
          "binding-proof-failed");
    CHECK(accept_contact(a.wallet.contacts(), honest, 9, ledger, {}, "Cat", 1).saved_label == "Cat");
}

TEST_CASE("endorsements by a mutual contact") {
    Ledger ledger(default_provider());
    auto a = person(ledger, "ann", {{"k", "1"}});
    auto b = person(ledger, "ben", {{"k", "2"}});
    auto c = person(ledger, "cat", {{"k", "3"}});
    exchange(a, b, ledger, 1);

    // Cat knows neither yet.
    CHECK(code_of([&] { endorse_contact(c.wallet, a.wallet.nft_id(), b.wallet, ledger); }) ==
          "not-mutual-contact");
    exchange(c, a, ledger, 2);
    CHECK(code_of([&] { endorse_contact(c.wallet, a.wallet.nft_id(), b.wallet, ledger); }) ==
          "not-mutual-contact");
    exchange(c, b, ledger, 3);

    const auto& entry = endorse_contact(c.wallet, a.wallet.nft_id(), b.wallet, ledger);
    REQUIRE(entry.endorsements.size() == 1);
    CHECK(entry.endorsements[0].endorser_nft == c.wallet.nft_id());
    CHECK(valid_endorsement_count(entry, b.wallet.nft_id(), ledger) == 1);
    // Re-endorsing replaces rather than stacks.
    endorse_contact(c.wallet, a.wallet.nft_id(), b.wallet, ledger);
    CHECK(b.wallet.contacts().find(a.wallet.nft_id())->endorsements.size() == 1);

    // Signature sweep: every corrupted byte invalidates the endorsement.
    auto e = entry.endorsements[0];
    for (std::size_t i = 0; i < e.signature.bytes.size(); ++i) {
        auto bad = e;
        bad.signature.bytes[i] ^= 0x20;
        CHECK_FALSE(verify_endorsement(bad, a.wallet.nft_id(), b.wallet.nft_id(), ledger));
    }
    // Bound to the book it was written for.
    CHECK_FALSE(verify_endorsement(e, a.wallet.nft_id(), c.wallet.nft_id(), ledger));
    CHECK(verify_endorsement(e, a.wallet.nft_id(), b.wallet.nft_id(), ledger));
}

TEST_CASE("endorsements never create contacts") {
    Ledger ledger(default_provider());
    auto a = person(ledger, "ann", {{"k", "1"}});
    auto b = person(ledger, "ben", {{"k", "2"}});
    auto c = person(ledger, "cat", {{"k", "3"}});
    exchange(c, a, ledger, 1);
    exchange(c, b, ledger, 2);
    auto before = b.wallet.contacts();
    CHECK(code_of([&] { endorse_contact(c.wallet, a.wallet.nft_id(), b.wallet, ledger); }) ==
          "not-mutual-contact");
    CHECK(b.wallet.contacts() == before);
    CHECK_FALSE(b.wallet.contacts().contains(a.wallet.nft_id()));
}

TEST_CASE("recognition verdicts") {
    Ledger ledger(default_provider());
    auto a = person(ledger, "ann", {{"hair", "red"}, {"coat", "long"}});
    auto b = person(ledger, "ben", {{"hair", "blue"}});
    auto m = person(ledger, "mal", {{"hair", "black"}});
    exchange(a, b, ledger, 1, "Ben");

    auto known = meet(a, b, ledger);
    CHECK(known.verdict == Verdict::known);
    CHECK(known.label == "Ben");

    auto stranger = meet(a, m, ledger);
    CHECK(stranger.verdict == Verdict::unknown);
    CHECK(stranger.label == m.wallet.nft_id().hex.substr(0, 8));

    m.avatar.appearance = b.avatar.appearance;
    auto clone = meet(a, m, ledger);
    CHECK(clone.verdict == Verdict::impersonation_warning);
    CHECK(to_string(clone.verdict) == "IMPERSONATION_WARNING");
    CHECK(clone.impersonated == b.wallet.nft_id());

    // Claiming the victim's nft without its key is unproven.
    auto claimed = m.avatar;
    claimed.nft_id = b.wallet.nft_id();
    BindingProof bogus{claimed.nft_id, 5, m.wallet.sign(binding_payload(claimed.nft_id, 5))};
    CHECK(recognize_avatar(a.wallet.contacts(), claimed, bogus, 5, ledger).verdict ==
          Verdict::impersonation_warning);
    CHECK(recognize_avatar(a.wallet.contacts(), claimed, std::nullopt, 5, ledger).verdict ==
          Verdict::impersonation_warning);
    claimed.appearance = {{"hair", "other"}};
    CHECK(recognize_avatar(a.wallet.contacts(), claimed, bogus, 5, ledger).verdict == Verdict::unknown);

    // A stale nonce makes an otherwise honest proof worthless.
    auto honest = prove_binding(b.wallet, 5);
    CHECK(recognize_avatar(a.wallet.contacts(), b.avatar, honest, 6, ledger).verdict !=
          Verdict::known);
}

TEST_CASE("clones with random appearance maps are always flagged") {
    std::mt19937_64 rng(41);
    Ledger ledger(test_provider());
    auto observer = person(ledger, "obs", {{"x", "y"}});
    auto attacker = person(ledger, "att", {{"x", "z"}});
    for (int i = 0; i < 100; ++i) {
        auto victim = person(ledger, "victim" + std::to_string(i), random_look(rng));
        exchange(observer, victim, ledger, static_cast<std::uint64_t>(i));
        attacker.avatar.appearance = victim.avatar.appearance;
        auto r = meet(observer, attacker, ledger, rng());
        REQUIRE(r.verdict == Verdict::impersonation_warning);
    }
}

TEST_CASE("a proven contact is known whatever it looks like") {
    std::mt19937_64 rng(42);
    Ledger ledger(test_provider());
    auto a = person(ledger, "ann", {{"hair", "red"}});
    auto b = person(ledger, "ben", {{"hair", "blue"}});
    exchange(a, b, ledger, 1, "Ben");
    for (int i = 0; i < 200; ++i) {
        b.avatar.appearance = random_look(rng);
        b.avatar.voice_tag = to_hex(random_bytes(rng, 3));
        b.avatar.display_name = "name" + std::to_string(i);
        auto r = meet(a, b, ledger, rng());
        REQUIRE(r.verdict == Verdict::known);
        REQUIRE(r.label == "Ben");
    }
}

TEST_CASE("avatar profiles encode canonically") {
    AvatarProfile p{NftId{"ab"}, "Ann", {{"b", "2"}, {"a", "1"}}, "alto"};
    CHECK(AvatarProfile::decode(p.encode()) == p);
    CHECK(encode_appearance({{"a", "1"}, {"b", "2"}}) == encode_appearance({{"b", "2"}, {"a", "1"}}));
    ContactEntry unnamed{NftId{"0123456789abcdef"}, "", {}, 0, {}};
    CHECK(unnamed.display_label() == "01234567");
}
