#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "metasim/auth.hpp"
#include "metasim/channel.hpp"
#include "metasim/contacts.hpp"
#include "metasim/sim/runner.hpp"

namespace py = pybind11;
using namespace metasim;

namespace {

py::bytes to_py(const Bytes& b) {
    return py::bytes(reinterpret_cast<const char*>(b.data()), b.size());
}

Bytes from_py(const py::bytes& b) {
    std::string_view v = b;
    return Bytes(v.begin(), v.end());
}

PublicKey public_key(const py::bytes& b) {
    return PublicKey{from_py(b)};
}

Nonce nonce_from(std::uint64_t counter) {
    return counter_nonce(counter);
}

void bind_crypto(py::module_& m) {
    py::class_<KeyPair>(m, "KeyPair")
            .def_property_readonly("public", [](const KeyPair& k) { return to_py(k.public_key.bytes); })
            .def_property_readonly("private", [](const KeyPair& k) { return to_py(k.private_key.bytes); });

    py::class_<CryptoProvider, std::unique_ptr<CryptoProvider, py::nodelete>>(m, "CryptoProvider")
            .def_property_readonly("name", [](const CryptoProvider& c) { return std::string(c.name()); })
            .def("generate_keypair",
                 [](const CryptoProvider& c, const py::bytes& seed) { return c.generate_keypair(from_py(seed)); },
                 py::arg("seed"))
            .def("dh",
                 [](const CryptoProvider& c, const KeyPair& mine, const py::bytes& peer) {
                     return to_py(c.dh(mine.private_key, public_key(peer)).bytes);
                 })
            .def("sign",
                 [](const CryptoProvider& c, const KeyPair& k, const py::bytes& msg) {
                     return to_py(c.sign(k.private_key, from_py(msg)).bytes);
                 })
            .def("verify",
                 [](const CryptoProvider& c, const py::bytes& pub, const py::bytes& msg, const py::bytes& sig) {
                     return c.verify(public_key(pub), from_py(msg), Signature{from_py(sig)});
                 })
            .def("aead_seal",
                 [](const CryptoProvider& c, const py::bytes& key, std::uint64_t counter,
                    const py::bytes& plaintext, const py::bytes& aad) {
                     return to_py(c.aead_seal(SymmetricKey::from(from_py(key)), nonce_from(counter),
                                              from_py(plaintext), from_py(aad)));
                 },
                 py::arg("key"), py::arg("counter"), py::arg("plaintext"), py::arg("aad") = py::bytes())
            .def("aead_open",
                 [](const CryptoProvider& c, const py::bytes& key, std::uint64_t counter,
                    const py::bytes& ciphertext, const py::bytes& aad) {
                     return to_py(c.aead_open(SymmetricKey::from(from_py(key)), nonce_from(counter),
                                              from_py(ciphertext), from_py(aad)));
                 },
                 py::arg("key"), py::arg("counter"), py::arg("ciphertext"), py::arg("aad") = py::bytes())
            .def("kdf",
                 [](const CryptoProvider& c, const std::vector<py::bytes>& inputs, const std::string& info,
                    std::size_t out_len) {
                     std::vector<Bytes> raw;
                     for (const auto& i : inputs)
                         raw.push_back(from_py(i));
                     return to_py(c.kdf(raw, info, out_len));
                 },
                 py::arg("inputs"), py::arg("info"), py::arg("out_len") = 32);

    m.def("default_provider", &default_provider, py::return_value_policy::reference);
    m.def("test_provider", &test_provider, py::return_value_policy::reference);
    m.def("provider_by_name", [](const std::string& n) { return &provider_by_name(n); },
          py::return_value_policy::reference);
    m.def("hkdf_sha256", [](const py::bytes& salt, const py::bytes& ikm, const py::bytes& info, std::size_t len) {
        return to_py(hkdf_sha256(from_py(salt), from_py(ikm), from_py(info), len));
    });
    m.def("x3dh_initiator",
          [](const CryptoProvider& c, const KeyPair& id, const KeyPair& eph, const py::bytes& peer_id,
             const py::bytes& peer_spk) {
              return to_py(x3dh_initiator(c, id, eph, public_key(peer_id), public_key(peer_spk)).bytes);
          });
    m.def("x3dh_responder",
          [](const CryptoProvider& c, const KeyPair& id, const KeyPair& spk, const py::bytes& peer_id,
             const py::bytes& peer_eph) {
              return to_py(x3dh_responder(c, id, spk, public_key(peer_id), public_key(peer_eph)).bytes);
          });
    m.def("sha256", [](const py::bytes& data) { return to_py(sha256(from_py(data))); });
}

void bind_identity(py::module_& m) {
    py::class_<Claim>(m, "Claim")
            .def(py::init([](std::string predicate, std::string subject) {
                     return Claim{std::move(predicate), NftId{std::move(subject)}};
                 }),
                 py::arg("predicate"), py::arg("subject_nft"))
            .def_readonly("predicate", &Claim::predicate)
            .def_property_readonly("subject_nft", [](const Claim& c) { return c.subject_nft.hex; });

    py::class_<AttestationCertificate>(m, "AttestationCertificate")
            .def_property_readonly("claim", [](const AttestationCertificate& c) { return c.claim; })
            .def_property_readonly("issuer", [](const AttestationCertificate& c) { return c.issuer_id.hex; })
            .def_readonly("issued_at", &AttestationCertificate::issued_at)
            .def("encode", [](const AttestationCertificate& c) { return to_py(c.encode()); })
            .def_static("decode", [](const py::bytes& b) { return AttestationCertificate::decode(from_py(b)); });

    py::class_<Ledger>(m, "Ledger")
            .def(py::init([](const CryptoProvider& c) { return std::make_unique<Ledger>(c); }),
                 py::arg("crypto"), py::keep_alive<1, 2>())
            .def("transfer_identity_nft",
                 [](Ledger& l, const std::string& nft, const std::string& new_owner) {
                     l.transfer_identity_nft(NftId{nft}, WalletAddress{new_owner});
                 })
            .def("resolve_nft", [](const Ledger& l, const std::string& nft) { return l.resolve_nft(NftId{nft}).owner.hex; })
            .def("identity_key_of",
                 [](const Ledger& l, const std::string& nft) { return to_py(l.identity_key_of(NftId{nft}).bytes); })
            .def("verify_certificate", &Ledger::verify_certificate)
            .def_property_readonly("head", &Ledger::head)
            .def_property_readonly("nft_count", &Ledger::nft_count)
            .def("serialize", &Ledger::serialize)
            .def("load", [](Ledger& l, const std::string& text) { l.load(text); })
            .def("index_digest", [](const Ledger& l) { return to_py(l.index_digest()); });

    py::class_<Wallet>(m, "Wallet")
            .def_static("create",
                        [](const py::bytes& seed, const CryptoProvider& c) { return Wallet::create(from_py(seed), c); },
                        py::arg("seed"), py::arg("crypto"), py::keep_alive<0, 2>())
            .def_property_readonly("address", [](const Wallet& w) { return w.address().hex; })
            .def_property_readonly("identity_public", [](const Wallet& w) { return to_py(w.identity_public().bytes); })
            .def_property_readonly("nft_id", [](const Wallet& w) { return w.nft_id().hex; })
            .def("publish_identity", &Wallet::publish_identity)
            .def("mint", [](Wallet& w, Ledger& l) { return w.mint(l).id.hex; })
            .def("rotate_identity_key",
                 [](Wallet& w, const py::bytes& seed, Ledger& l) { return w.rotate_identity_key(from_py(seed), l); })
            .def("publish_prekeys",
                 [](Wallet& w, std::size_t n, Ledger& l) { return l.publish_prekey_bundle(w.create_prekey_bundle(n)); })
            .def("hold_certificate", &Wallet::hold_certificate)
            .def_property_readonly("certificates", &Wallet::certificates)
            .def("public_view", [](const Wallet& w) { return to_py(w.public_view()); });

    m.def("issue_attestation",
          [](const Wallet& issuer, const Claim& claim, const Ledger& ledger) {
              return issue_attestation(issuer, claim, ledger);
          });
    m.def("publish_attestation", [](Ledger& l, const AttestationCertificate& cert) {
        return l.publish_attestation(AttestationRecord::from(cert));
    });
}

void bind_auth(py::module_& m) {
    py::class_<Challenge>(m, "Challenge")
            .def_readonly("nonce", &Challenge::nonce)
            .def_readonly("world_id", &Challenge::world_id);

    py::class_<AuthResult>(m, "AuthResult")
            .def_readonly("accepted", &AuthResult::accepted)
            .def_readonly("reason", &AuthResult::reason)
            .def_readonly("recognized_returning", &AuthResult::recognized_returning)
            .def_readonly("session_id", &AuthResult::session_id)
            .def("outcome", &AuthResult::outcome)
            .def("__repr__", &AuthResult::outcome);

    py::class_<Authenticator>(m, "Authenticator")
            .def(py::init<std::string, std::uint64_t>(), py::arg("world_id"), py::arg("rng_seed") = 0)
            .def("issue_challenge",
                 [](Authenticator& a, const Wallet& w, std::uint64_t now) {
                     return a.issue_challenge(w.nft() ? w.nft()->id : NftId{}, now);
                 },
                 py::arg("wallet"), py::arg("now") = 0)
            .def("authenticate_open",
                 [](Authenticator& a, const Wallet& w, const Challenge& c, const Ledger& l, std::uint64_t now) {
                     return authenticate_open(a, w, c, l, now);
                 },
                 py::arg("wallet"), py::arg("challenge"), py::arg("ledger"), py::arg("now") = 0)
            .def("authenticate_restricted",
                 [](Authenticator& a, const Wallet& w, const Challenge& c, const std::string& predicate,
                    const std::vector<std::string>& trusted, const Ledger& l, std::uint64_t now) {
                     std::set<WalletAddress> issuers;
                     for (const auto& t : trusted)
                         issuers.insert(WalletAddress{t});
                     return authenticate_restricted(a, w, c, predicate, issuers, l, now);
                 },
                 py::arg("wallet"), py::arg("challenge"), py::arg("predicate"), py::arg("trusted"),
                 py::arg("ledger"), py::arg("now") = 0);
}

void bind_channel(py::module_& m) {
    py::class_<ChannelState>(m, "ChannelState")
            .def_property_readonly("channel_id", [](const ChannelState& s) { return to_py(s.channel_id); })
            .def_property_readonly("session_key", [](const ChannelState& s) { return to_py(Bytes(s.session_key.bytes.begin(), s.session_key.bytes.end())); });

    py::class_<ChannelOpening>(m, "ChannelOpening")
            .def_readonly("state", &ChannelOpening::state)
            .def_property_readonly("request", [](const ChannelOpening& o) { return to_py(o.request.encode()); });

    m.def("request_channel",
          [](const Wallet& requester, const std::string& receiver_nft, const Ledger& l,
             const py::bytes& ephemeral_seed, std::uint64_t now) {
              return request_channel(requester, NftId{receiver_nft}, l, from_py(ephemeral_seed), now);
          },
          py::arg("requester"), py::arg("receiver_nft"), py::arg("ledger"), py::arg("ephemeral_seed"),
          py::arg("now") = 0);
    m.def("accept_channel",
          [](const Wallet& receiver, const py::bytes& request, const Ledger& l, std::uint64_t now) {
              return accept_channel(receiver, from_py(request), l, now);
          },
          py::arg("receiver"), py::arg("request"), py::arg("ledger"), py::arg("now") = 0);
    m.def("send_message", [](ChannelState& s, const CryptoProvider& c, const py::bytes& text) {
        return to_py(send_message(s, c, from_py(text)).encode());
    });
    m.def("receive_message", [](ChannelState& s, const CryptoProvider& c, const py::bytes& envelope) {
        return to_py(receive_message(s, c, Envelope::decode(from_py(envelope))));
    });
}

void bind_sim(py::module_& m) {
    py::class_<sim::Scenario>(m, "Scenario")
            .def_readonly("name", &sim::Scenario::name)
            .def_readwrite("seed", &sim::Scenario::seed)
            .def_property_readonly("user_count", [](const sim::Scenario& s) { return s.count(sim::ActorType::user); })
            .def_property_readonly("party_count", [](const sim::Scenario& s) { return s.count(sim::ActorType::party); })
            .def_property_readonly("world_count", [](const sim::Scenario& s) { return s.worlds.size(); })
            .def_property_readonly("event_count", [](const sim::Scenario& s) { return s.events.size(); });

    py::class_<sim::Transcript>(m, "Transcript")
            .def("serialize", &sim::Transcript::serialize)
            .def_static("parse", [](const std::string& text) { return sim::Transcript::parse(text); })
            .def("outcome_lines", &sim::Transcript::outcome_lines)
            .def("__len__", &sim::Transcript::size)
            .def("__eq__", [](const sim::Transcript& a, const sim::Transcript& b) { return a == b; });

    m.def("load_scenario", &sim::load_scenario, py::arg("path_or_name"));
    m.def("parse_scenario", [](const std::string& text) { return sim::parse_scenario(text); });
    m.def("bundled_scenario_names", &sim::bundled_scenario_names);
    m.def("run_scenario",
          [](const sim::Scenario& s, const CryptoProvider* c) {
              return sim::run_scenario(s, c ? *c : provider_from_env());
          },
          py::arg("scenario"), py::arg("crypto") = nullptr);
    m.def("audit_worlds", [](const sim::Scenario& s, const CryptoProvider* c) {
        sim::Simulation run(s, c ? *c : provider_from_env());
        run.run();
        return run.audit_worlds();
    }, py::arg("scenario"), py::arg("crypto") = nullptr);
}

}  // namespace

PYBIND11_MODULE(_metasim, m) {
    m.doc() = "metasim core bindings";

    static py::exception<Error> error(m, "Error", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p)
                std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object args = py::make_tuple(e.code(), std::string(e.what()));
            PyErr_SetObject(error.ptr(), args.ptr());
        }
    });

    bind_crypto(m);
    bind_identity(m);
    bind_auth(m);
    bind_channel(m);
    bind_sim(m);
}
