#include "metasim/sim/runner.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <random>
#include <set>

#include "metasim/auth.hpp"
#include "metasim/canonical.hpp"
#include "metasim/channel.hpp"
#include "metasim/contacts.hpp"

namespace metasim::sim {

namespace {

constexpr std::string_view channel_ack_text = "channel-ack";

struct User {
    std::string name;
    Wallet wallet;
    AvatarProfile avatar;
    Params private_attrs;
    std::map<std::string, ChannelState> channels;
};

struct Party {
    std::string name;
    Wallet wallet;
    bool active = true;
};

struct World {
    WorldDecl decl;
    Authenticator auth;
    std::set<WalletAddress> trusted;
    std::map<NftId, AppearanceMap> avatar_views;
    std::map<NftId, std::string> sessions;

    Bytes encode_state() const {
        Encoder e;
        e.str(decl.id).u8(decl.policy == AccessPolicy::open ? 0 : 1).str(decl.predicate);
        e.u32(static_cast<std::uint32_t>(trusted.size()));
        for (const auto& t : trusted)
            e.str(t.hex);
        e.bytes(auth.encode_state());
        e.u32(static_cast<std::uint32_t>(avatar_views.size()));
        for (const auto& [id, appearance] : avatar_views)
            e.str(id.hex).bytes(encode_appearance(appearance));
        e.u32(static_cast<std::uint32_t>(sessions.size()));
        for (const auto& [id, sid] : sessions)
            e.str(id.hex).str(sid);
        return std::move(e).take();
    }
};

// Attributes of a user declaration that describe the avatar; everything else
// is private real-world data known only to the user and trusted parties.
bool is_avatar_attr(const std::string& key) {
    return key == "display" || key == "appearance" || key == "voice";
}

AppearanceMap parse_appearance(const std::string& text) {
    AppearanceMap out;
    std::size_t start = 0;
    while (start < text.size()) {
        auto comma = text.find(',', start);
        if (comma == std::string::npos)
            comma = text.size();
        auto pair = text.substr(start, comma - start);
        auto colon = pair.find(':');
        if (colon != std::string::npos)
            out[pair.substr(0, colon)] = pair.substr(colon + 1);
        start = comma + 1;
    }
    return out;
}

bool flag(const Params& p, const std::string& key) {
    auto it = p.find(key);
    return it != p.end() && it->second == "yes";
}

std::string rejected(const std::string& code) {
    return "rejected(" + code + ")";
}

// age_over_18 holds when birthdate + 18 years <= today (ISO dates compare
// lexicographically).
bool evaluate_predicate(const std::string& predicate, const Params& attrs,
                        const std::string& today) {
    if (predicate == "age_over_18") {
        auto it = attrs.find("birthdate");
        if (it == attrs.end())
            return false;
        int year = std::stoi(it->second.substr(0, 4)) + 18;
        auto adult_on = std::to_string(year) + it->second.substr(4);
        while (adult_on.size() < 10)
            adult_on.insert(adult_on.begin(), '0');
        return adult_on <= today;
    }
    if (predicate == "kyc_verified") {
        auto it = attrs.find("kyc");
        return it != attrs.end() && it->second == "verified";
    }
    return true;
}

}  // namespace

struct Simulation::Impl {
    Scenario scenario;
    const CryptoProvider* crypto;
    Ledger ledger;
    Transcript transcript;
    std::mt19937_64 rng;
    std::uint64_t clock = 0;
    std::string current_actor;
    std::ostream* verbose = nullptr;
    bool ran = false;

    std::map<std::string, User, std::less<>> users;
    std::map<std::string, Party, std::less<>> parties;
    std::map<std::string, World, std::less<>> worlds;
    std::vector<AttestationCertificate> issued;
    std::map<NftId, WalletAddress> minted_owners;
    std::map<std::string, std::uint32_t> rotations;

    Impl(Scenario s, const CryptoProvider& c)
        : scenario(std::move(s)), crypto(&c), ledger(c), rng(scenario.seed) {
        ledger.set_observer([this](bool write, std::string_view op, std::string_view key) {
            on_ledger(write, op, key);
        });
    }

    ~Impl() { ledger.set_observer(nullptr); }

    // ---- tracing --------------------------------------------------------

    struct ActorScope {
        Impl& impl;
        std::string saved;
        ActorScope(Impl& i, const std::string& actor) : impl(i), saved(i.current_actor) {
            impl.current_actor = actor;
        }
        ~ActorScope() { impl.current_actor = saved; }
    };

    void record(std::string actor, std::string event, Bytes detail, std::string outcome) {
        auto& r = transcript.append(clock, std::move(actor), std::move(event), std::move(detail),
                                    std::move(outcome));
        if (verbose)
            *verbose << r.seq << '|' << r.time << '|' << r.actor << '|' << r.event << '|'
                     << r.outcome << '\n';
    }

    void send(const std::string& from, const std::string& to, const std::string& type,
              Bytes payload) {
        ++clock;
        record(from, "msg:" + type, encode_message_detail({from, to, type, std::move(payload)}),
               "delivered");
    }

    void on_ledger(bool write, std::string_view op, std::string_view key) {
        if (current_actor.empty())
            return;
        ++clock;
        record(current_actor, write ? "msg:ledger.write" : "msg:ledger.read",
               encode_message_detail({current_actor, "ledger", std::string(op), to_bytes(key)}),
               write ? "written" : "read");
    }

    // ---- setup ----------------------------------------------------------

    Bytes actor_seed(const std::string& name, std::string_view purpose, std::uint64_t n = 0) {
        return sha256(Encoder{}.str("metasim/actor-seed/v1").u64(scenario.seed).str(name).str(purpose).u64(n).take());
    }

    Bytes fresh_seed() {
        Encoder e;
        for (int i = 0; i < 4; ++i)
            e.u64(rng());
        return std::move(e).take();
    }

    void setup() {
        for (const auto& a : scenario.actors) {
            // Provisioning happens before the clock starts and is not traced,
            // so a scenario without events yields an empty transcript.
            auto wallet = Wallet::create(actor_seed(a.name, "identity"), *crypto);
            wallet.publish_identity(ledger);
            if (a.type == ActorType::party) {
                parties.emplace(a.name, Party{a.name, std::move(wallet), true});
            } else {
                User u{a.name, std::move(wallet), {}, {}, {}};
                u.avatar.display_name = a.name;
                for (const auto& [k, v] : a.attrs) {
                    if (k == "display")
                        u.avatar.display_name = v;
                    else if (k == "appearance")
                        u.avatar.appearance = parse_appearance(v);
                    else if (k == "voice")
                        u.avatar.voice_tag = v;
                    else if (!is_avatar_attr(k))
                        u.private_attrs[k] = v;
                }
                users.emplace(a.name, std::move(u));
            }
        }
        for (const auto& w : scenario.worlds) {
            World world{w, Authenticator(w.id, rng()), {}, {}, {}};
            for (const auto& tp : w.trusted_parties)
                world.trusted.insert(parties.at(tp).wallet.address());
            worlds.emplace(w.id, std::move(world));
        }
    }

    // ---- event handlers -------------------------------------------------

    std::string do_mint(const EventDecl& e) {
        auto& u = users.at(e.params.at("user"));
        ActorScope scope(*this, u.name);
        const auto& nft = u.wallet.mint(ledger);
        u.avatar.nft_id = nft.id;
        minted_owners[nft.id] = nft.owner;
        if (auto it = e.params.find("prekeys"); it != e.params.end()) {
            auto n = std::stoull(it->second);
            ledger.publish_prekey_bundle(u.wallet.create_prekey_bundle(n));
            return "minted(prekeys=" + std::to_string(n) + ")";
        }
        return "minted";
    }

    std::string do_publish_prekeys(const EventDecl& e) {
        auto& u = users.at(e.params.at("user"));
        ActorScope scope(*this, u.name);
        auto n = std::stoull(e.params.at("count"));
        ledger.publish_prekey_bundle(u.wallet.create_prekey_bundle(n));
        return "published(count=" + std::to_string(n) + ")";
    }

    std::string do_attest(const EventDecl& e) {
        auto& p = parties.at(e.params.at("party"));
        auto& u = users.at(e.params.at("user"));
        const auto& predicate = e.params.at("predicate");
        if (!p.active)
            return rejected("party-unavailable");
        if (!u.wallet.nft())
            return rejected("no-identity-nft");
        if (!evaluate_predicate(predicate, u.private_attrs, scenario.today))
            return rejected("claim-denied");

        AttestationCertificate cert;
        {
            ActorScope scope(*this, p.name);
            cert = issue_attestation(p.wallet, Claim{predicate, u.wallet.nft()->id}, ledger);
        }
        send(p.name, u.name, "attest.certificate", cert.encode());
        u.wallet.hold_certificate(cert);
        issued.push_back(cert);
        if (flag(e.params, "publish")) {
            ActorScope scope(*this, u.name);
            ledger.publish_attestation(AttestationRecord::from(cert));
            return "issued+published";
        }
        return "issued";
    }

    AuthResult authenticate(User& u, World& w) {
        send(u.name, w.decl.id, "auth.hello", u.avatar.encode());
        auto requester = u.wallet.nft() ? u.wallet.nft()->id : NftId{};
        auto challenge = w.auth.issue_challenge(requester, clock);
        send(w.decl.id, u.name, "auth.challenge", challenge.encode());

        AuthResponse response;
        {
            ActorScope scope(*this, u.name);
            if (w.decl.policy == AccessPolicy::restricted)
                response = respond_restricted(u.wallet, challenge, w.decl.predicate,
                                              {w.trusted.begin(), w.trusted.end()});
            else
                response = respond_open(u.wallet, challenge);
        }
        auto wire = response.encode();
        send(u.name, w.decl.id, "auth.response", wire);

        AuthResult result;
        {
            ActorScope scope(*this, w.decl.id);
            auto received = AuthResponse::decode(wire);
            if (w.decl.policy == AccessPolicy::restricted)
                result = w.auth.authenticate_restricted(challenge.nonce, received, ledger,
                                                        w.decl.predicate, w.trusted, clock);
            else
                result = w.auth.authenticate_open(challenge.nonce, received, ledger, clock);
        }
        send(w.decl.id, u.name, "auth.result",
             Encoder{}.str(result.outcome()).str(result.session_id).take());
        if (result.accepted) {
            w.sessions[response.nft] = result.session_id;
            // The world keeps the avatar as presented in the hello message.
            w.avatar_views[response.nft] = u.avatar.appearance;
        }
        return result;
    }

    std::string do_authenticate(const EventDecl& e) {
        return authenticate(users.at(e.params.at("user")), worlds.at(e.params.at("world"))).outcome();
    }

    std::string do_migrate(const EventDecl& e) {
        auto& u = users.at(e.params.at("user"));
        auto& from = worlds.at(e.params.at("from"));
        auto& to = worlds.at(e.params.at("to"));
        if (!u.wallet.nft() || !from.sessions.count(u.wallet.nft()->id))
            return rejected("not-in-source-world");

        auto result = authenticate(u, to);
        if (result.accepted) {
            const auto& nft = u.wallet.nft()->id;
            if (encode_appearance(from.avatar_views.at(nft)) !=
                encode_appearance(to.avatar_views.at(nft)))
                throw InvariantBreach("avatar of " + u.name + " differs between " +
                                      from.decl.id + " and " + to.decl.id);
        }
        return result.outcome();
    }

    std::optional<WalletAddress> party_address(const Params& p, const std::string& key) {
        auto it = p.find(key);
        if (it == p.end())
            return std::nullopt;
        return parties.at(it->second).wallet.address();
    }

    std::string do_open_channel(const EventDecl& e) {
        auto& a = users.at(e.params.at("from"));
        auto& b = users.at(e.params.at("to"));
        if (!b.wallet.nft())
            return rejected("no-identity-nft");

        ChannelOpening opening;
        {
            ActorScope scope(*this, a.name);
            opening = request_channel(a.wallet, b.wallet.nft()->id, ledger, fresh_seed(), clock,
                                      party_address(e.params, "tp"));
        }
        auto request_wire = opening.request.encode();
        send(a.name, b.name, "channel.request", request_wire);

        ChannelState accepted;
        Envelope ack;
        {
            ActorScope scope(*this, b.name);
            accepted = accept_channel(b.wallet, request_wire, ledger, clock);
            ack = send_message(accepted, *crypto, as_view(channel_ack_text));
        }
        send(b.name, a.name, "channel.ack", ack.encode());
        auto confirm = receive_message(opening.state, *crypto, ack);
        if (confirm != to_bytes(channel_ack_text))
            throw InvariantBreach("channel ack decrypted to unexpected bytes");

        a.channels.insert_or_assign(b.name, opening.state);
        b.channels.insert_or_assign(a.name, accepted);
        return "established";
    }

    std::string do_message(const EventDecl& e) {
        auto& a = users.at(e.params.at("from"));
        auto& b = users.at(e.params.at("to"));
        auto sender = a.channels.find(b.name);
        auto receiver = b.channels.find(a.name);
        if (sender == a.channels.end() || receiver == b.channels.end())
            return rejected("no-channel");

        const auto& text = e.params.at("text");
        auto env = send_message(sender->second, *crypto, as_view(text));
        if (flag(e.params, "tamper") && !env.ciphertext.empty())
            env.ciphertext[0] ^= 0x01;
        auto wire = env.encode();

        std::string outcome = "delivered";
        int deliveries = flag(e.params, "replay") ? 2 : 1;
        for (int i = 0; i < deliveries; ++i) {
            send(a.name, b.name, "channel.message", wire);
            try {
                auto plaintext = receive_message(receiver->second, *crypto, Envelope::decode(wire));
                if (plaintext != to_bytes(text))
                    throw InvariantBreach("message decrypted to different plaintext");
                outcome = "delivered";
            } catch (const InvariantBreach&) {
                throw;
            } catch (const Error& err) {
                outcome = rejected(err.code());
            }
        }
        return outcome;
    }

    std::string do_exchange_contacts(const EventDecl& e) {
        auto& a = users.at(e.params.at("a"));
        auto& b = users.at(e.params.at("b"));
        if (!a.wallet.nft() || !b.wallet.nft())
            return rejected("no-identity-nft");

        auto label = [&](const char* key) {
            auto it = e.params.find(key);
            return it == e.params.end() ? std::string() : it->second;
        };
        std::uint64_t nonce_a = rng(), nonce_b = rng();
        send(a.name, b.name, "contact.challenge", Encoder{}.u64(nonce_a).take());
        send(b.name, a.name, "contact.challenge", Encoder{}.u64(nonce_b).take());

        auto proof_b = prove_binding(b.wallet, nonce_a);
        send(b.name, a.name, "contact.proof",
             Encoder{}.bytes(proof_b.encode()).bytes(b.avatar.encode()).take());
        auto proof_a = prove_binding(a.wallet, nonce_b);
        send(a.name, b.name, "contact.proof",
             Encoder{}.bytes(proof_a.encode()).bytes(a.avatar.encode()).take());

        bool ok_at_a, ok_at_b;
        {
            ActorScope scope(*this, a.name);
            ok_at_a = verify_binding(proof_b, nonce_a, ledger) && proof_b.nft_id == b.avatar.nft_id;
        }
        {
            ActorScope scope(*this, b.name);
            ok_at_b = verify_binding(proof_a, nonce_b, ledger) && proof_a.nft_id == a.avatar.nft_id;
        }
        if (!ok_at_a || !ok_at_b)
            return rejected("binding-proof-failed");

        a.wallet.contacts().upsert(proof_b.nft_id, label("label_a"), clock, b.avatar.appearance);
        b.wallet.contacts().upsert(proof_a.nft_id, label("label_b"), clock, a.avatar.appearance);
        return "exchanged";
    }

    std::string do_endorse(const EventDecl& e) {
        auto& c = users.at(e.params.at("by"));
        auto& subject = users.at(e.params.at("subject"));
        auto& target = users.at(e.params.at("target"));
        if (!c.wallet.nft() || !subject.wallet.nft() || !target.wallet.nft())
            return rejected("no-identity-nft");

        ContactEntry entry;
        {
            ActorScope scope(*this, c.name);
            entry = endorse_contact(c.wallet, subject.wallet.nft()->id, target.wallet, ledger);
        }
        const auto& endorsement = entry.endorsements.back();
        send(c.name, target.name, "contact.endorsement",
             Encoder{}
                     .str(subject.wallet.nft()->id.hex)
                     .str(endorsement.endorser_nft.hex)
                     .bytes(endorsement.signature.bytes)
                     .take());
        std::size_t valid;
        {
            ActorScope scope(*this, target.name);
            valid = valid_endorsement_count(entry, target.wallet.nft()->id, ledger);
        }
        return "endorsed(valid=" + std::to_string(valid) + ")";
    }

    static std::string render(const RecognitionResult& r) {
        return std::string(to_string(r.verdict)) + "(" + r.label + ")";
    }

    std::string meet(User& observer, const std::string& presenter, const AvatarProfile& shown,
                     const std::function<BindingProof(std::uint64_t)>& prove) {
        std::uint64_t nonce = rng();
        send(observer.name, presenter, "contact.challenge", Encoder{}.u64(nonce).take());
        auto proof = prove(nonce);
        send(presenter, observer.name, "contact.proof",
             Encoder{}.bytes(proof.encode()).bytes(shown.encode()).take());
        ActorScope scope(*this, observer.name);
        return render(recognize_avatar(observer.wallet.contacts(), shown, proof, nonce, ledger));
    }

    std::string do_impersonate(const EventDecl& e) {
        auto& attacker = users.at(e.params.at("attacker"));
        auto& victim = users.at(e.params.at("victim"));
        auto& observer = users.at(e.params.at("observer"));
        if (!attacker.wallet.nft() || !victim.wallet.nft())
            return rejected("no-identity-nft");

        bool claim_victim = e.params.count("mode") && e.params.at("mode") == "claim-victim";
        AvatarProfile clone = victim.avatar;
        clone.nft_id = claim_victim ? victim.wallet.nft()->id : attacker.wallet.nft()->id;
        return meet(observer, attacker.name, clone, [&](std::uint64_t nonce) {
            return BindingProof{clone.nft_id, nonce,
                                attacker.wallet.sign(binding_payload(clone.nft_id, nonce))};
        });
    }

    std::string do_meet(const EventDecl& e) {
        auto& observer = users.at(e.params.at("observer"));
        auto& subject = users.at(e.params.at("subject"));
        if (!subject.wallet.nft())
            return rejected("no-identity-nft");
        return meet(observer, subject.name, subject.avatar,
                    [&](std::uint64_t nonce) { return prove_binding(subject.wallet, nonce); });
    }

    std::string do_remove_party(const EventDecl& e) {
        parties.at(e.params.at("party")).active = false;
        return "removed";
    }

    std::string do_rotate_key(const EventDecl& e) {
        const auto& name = e.params.at("actor");
        Wallet* wallet = nullptr;
        if (auto it = users.find(name); it != users.end()) {
            wallet = &it->second.wallet;
        } else {
            auto& p = parties.at(name);
            if (!p.active)
                return rejected("party-unavailable");
            wallet = &p.wallet;
        }
        ActorScope scope(*this, name);
        wallet->rotate_identity_key(actor_seed(name, "rotation", ++rotations[name]), ledger);
        return "rotated";
    }

    std::string dispatch(const EventDecl& e) {
        if (e.kind == "mint") return do_mint(e);
        if (e.kind == "publish-prekeys") return do_publish_prekeys(e);
        if (e.kind == "attest") return do_attest(e);
        if (e.kind == "authenticate") return do_authenticate(e);
        if (e.kind == "migrate") return do_migrate(e);
        if (e.kind == "open-channel") return do_open_channel(e);
        if (e.kind == "message") return do_message(e);
        if (e.kind == "exchange-contacts") return do_exchange_contacts(e);
        if (e.kind == "endorse") return do_endorse(e);
        if (e.kind == "impersonate") return do_impersonate(e);
        if (e.kind == "meet") return do_meet(e);
        if (e.kind == "remove-party") return do_remove_party(e);
        if (e.kind == "rotate-key") return do_rotate_key(e);
        throw Error("parse-error", "unknown event kind " + e.kind);
    }

    static std::string principal(const EventDecl& e) {
        for (const char* key : {"party", "user", "from", "a", "by", "attacker", "observer", "actor"})
            if (auto it = e.params.find(key); it != e.params.end())
                return it->second;
        return "sim";
    }

    static Bytes encode_params(const EventDecl& e) {
        Encoder enc;
        enc.u32(static_cast<std::uint32_t>(e.params.size()));
        for (const auto& [k, v] : e.params)
            enc.str(k).str(v);
        return std::move(enc).take();
    }

    // ---- invariants -----------------------------------------------------

    std::vector<std::string> audit_worlds() const {
        std::vector<std::pair<std::string, Bytes>> secrets;
        for (const auto& [name, u] : users) {
            secrets.emplace_back(name + " identity key", u.wallet.identity_keypair().private_key.bytes);
            for (auto id : u.wallet.prekey_ids())
                secrets.emplace_back(name + " prekey " + std::to_string(id),
                                     u.wallet.prekey(id)->private_key.bytes);
            // Attribute values are matched in their canonical string form so a
            // short value like "verified" does not hit inside "kyc_verified".
            for (const auto& [k, v] : u.private_attrs)
                secrets.emplace_back(name + " attribute " + k, Encoder{}.str(v).take());
        }
        for (const auto& cert : issued)
            secrets.emplace_back("certificate for " + uuid_label(cert.claim.subject_nft), cert.encode());

        std::vector<std::string> violations;
        for (const auto& [id, w] : worlds) {
            auto state = w.encode_state();
            for (const auto& [what, bytes] : secrets)
                if (contains_subsequence(state, bytes))
                    violations.push_back("world " + id + " stores " + what);
        }
        return violations;
    }

    void check_invariants() {
        auto saved = current_actor;
        current_actor.clear();
        if (auto v = audit_worlds(); !v.empty())
            throw InvariantBreach(v.front());
        std::size_t minted_users = 0;
        for (const auto& [name, u] : users) {
            if (!u.wallet.nft())
                continue;
            ++minted_users;
            auto on_ledger = ledger.nft_of(u.wallet.address());
            if (!on_ledger || on_ledger->id != u.wallet.nft()->id)
                throw InvariantBreach(name + " does not have exactly one identity nft");
        }
        if (ledger.nft_count() != minted_users)
            throw InvariantBreach("ledger holds identity nfts not owned by any user");
        for (const auto& [id, owner] : minted_owners)
            if (ledger.resolve_nft(id).owner != owner)
                throw InvariantBreach("owner of nft " + id.hex + " changed");
        current_actor = saved;
    }

    void run() {
        if (ran)
            return;
        ran = true;
        setup();
        check_invariants();

        std::vector<const EventDecl*> order;
        for (const auto& e : scenario.events)
            order.push_back(&e);
        std::stable_sort(order.begin(), order.end(),
                         [](const EventDecl* x, const EventDecl* y) { return x->at < y->at; });

        for (const auto* e : order) {
            clock = std::max(clock, e->at);
            std::string outcome;
            try {
                outcome = dispatch(*e);
            } catch (const InvariantBreach&) {
                throw;
            } catch (const Error& err) {
                outcome = rejected(err.code());
            }
            record(principal(*e), e->kind, encode_params(*e), outcome);
            check_invariants();
        }
    }
};

Simulation::Simulation(Scenario scenario, const CryptoProvider& crypto)
    : impl_(std::make_unique<Impl>(std::move(scenario), crypto)) {}

Simulation::~Simulation() = default;

const Transcript& Simulation::run() {
    impl_->run();
    return impl_->transcript;
}

void Simulation::set_verbose(std::ostream* out) {
    impl_->verbose = out;
}

const Transcript& Simulation::transcript() const {
    return impl_->transcript;
}

const Ledger& Simulation::ledger() const {
    return impl_->ledger;
}

const Scenario& Simulation::scenario() const {
    return impl_->scenario;
}

std::vector<std::string> Simulation::world_ids() const {
    std::vector<std::string> out;
    for (const auto& [id, w] : impl_->worlds)
        out.push_back(id);
    return out;
}

Bytes Simulation::world_state(std::string_view world_id) const {
    auto it = impl_->worlds.find(world_id);
    if (it == impl_->worlds.end())
        throw Error("not-found", std::string(world_id));
    return it->second.encode_state();
}

const Wallet& Simulation::wallet(std::string_view actor) const {
    if (auto it = impl_->users.find(actor); it != impl_->users.end())
        return it->second.wallet;
    if (auto it = impl_->parties.find(actor); it != impl_->parties.end())
        return it->second.wallet;
    throw Error("not-found", std::string(actor));
}

const AvatarProfile& Simulation::avatar(std::string_view user) const {
    auto it = impl_->users.find(user);
    if (it == impl_->users.end())
        throw Error("not-found", std::string(user));
    return it->second.avatar;
}

const std::vector<AttestationCertificate>& Simulation::issued_certificates() const {
    return impl_->issued;
}

std::vector<std::string> Simulation::audit_worlds() const {
    return impl_->audit_worlds();
}

Transcript run_scenario(const Scenario& scenario, const CryptoProvider& crypto) {
    Simulation sim(scenario, crypto);
    return sim.run();
}

}  // namespace metasim::sim
