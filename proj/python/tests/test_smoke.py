import pytest

import metasim


def make_wallet(name, crypto, ledger):
    w = metasim.Wallet.create(metasim.sha256(name.encode()), crypto)
    w.publish_identity(ledger)
    return w


@pytest.fixture(params=["default", "test"])
def crypto(request):
    return metasim.provider_by_name(request.param)


def test_sign_and_dh(crypto):
    a = crypto.generate_keypair(b"\x01" * 32)
    b = crypto.generate_keypair(b"\x02" * 32)
    assert crypto.dh(a, b.public) == crypto.dh(b, a.public)
    sig = crypto.sign(a, b"hello")
    assert crypto.verify(a.public, b"hello", sig)
    assert not crypto.verify(a.public, b"hellp", sig)


def test_aead_roundtrip_and_tamper(crypto):
    key = bytes(range(32))
    ct = crypto.aead_seal(key, 7, b"payload", b"aad")
    assert crypto.aead_open(key, 7, ct, b"aad") == b"payload"
    bad = bytes([ct[0] ^ 1]) + ct[1:]
    with pytest.raises(metasim.Error) as err:
        crypto.aead_open(key, 7, bad, b"aad")
    assert err.value.code == "aead-auth-fail"


def test_soulbound_nft(crypto):
    ledger = metasim.Ledger(crypto)
    alice = make_wallet("alice", crypto, ledger)
    bob = make_wallet("bob", crypto, ledger)
    nft = alice.mint(ledger)
    with pytest.raises(metasim.Error) as err:
        alice.mint(ledger)
    assert err.value.code == "nft-exists"
    with pytest.raises(metasim.Error) as err:
        ledger.transfer_identity_nft(nft, bob.address)
    assert err.value.code == "soulbound-transfer-forbidden"
    assert ledger.resolve_nft(nft) == alice.address


def test_open_and_restricted_worlds(crypto):
    ledger = metasim.Ledger(crypto)
    tp = make_wallet("notary", crypto, ledger)
    user = make_wallet("alice", crypto, ledger)
    user.mint(ledger)

    plaza = metasim.Authenticator("plaza", 1)
    first = plaza.authenticate_open(user, plaza.issue_challenge(user), ledger)
    again = plaza.authenticate_open(user, plaza.issue_challenge(user), ledger)
    assert first.outcome() == "accepted(returning=false)"
    assert again.outcome() == "accepted(returning=true)"

    lounge = metasim.Authenticator("lounge", 2)
    denied = lounge.authenticate_restricted(
        user, lounge.issue_challenge(user), "age_over_18", [tp.address], ledger)
    assert denied.reason == "missing-claim"

    cert = metasim.issue_attestation(tp, metasim.Claim("age_over_18", user.nft_id), ledger)
    user.hold_certificate(cert)
    ok = lounge.authenticate_restricted(
        user, lounge.issue_challenge(user), "age_over_18", [tp.address], ledger)
    assert ok.accepted


def test_channel_roundtrip(crypto):
    ledger = metasim.Ledger(crypto)
    tp = make_wallet("registry", crypto, ledger)
    a = make_wallet("a", crypto, ledger)
    b = make_wallet("b", crypto, ledger)
    for w in (a, b):
        w.mint(ledger)
        cert = metasim.issue_attestation(tp, metasim.Claim("world_member", w.nft_id), ledger)
        w.hold_certificate(cert)
        metasim.publish_attestation(ledger, cert)
    b.publish_prekeys(2, ledger)

    opening = metasim.request_channel(a, b.nft_id, ledger, b"\x09" * 32)
    accepted = metasim.accept_channel(b, opening.request, ledger)
    assert accepted.session_key == opening.state.session_key
    env = metasim.send_message(opening.state, crypto, b"hi")
    assert metasim.receive_message(accepted, crypto, env) == b"hi"
    with pytest.raises(metasim.Error) as err:
        metasim.receive_message(accepted, crypto, env)
    assert err.value.code == "replay"


def test_bundled_demo_is_deterministic():
    scenario = metasim.load_scenario("demo")
    assert (scenario.world_count, scenario.user_count, scenario.party_count) == (3, 4, 1)
    first = metasim.run_scenario(scenario)
    second = metasim.run_scenario(scenario)
    assert first.serialize() == second.serialize()
    assert metasim.Transcript.parse(first.serialize()) == first
    lines = first.outcome_lines()
    assert "authenticate alice accepted(returning=false)" in lines
    assert "authenticate alice rejected(missing-claim)" in lines
    assert metasim.audit_worlds(scenario) == []


def test_empty_scenario_has_empty_transcript():
    assert len(metasim.run_scenario(metasim.load_scenario("empty"))) == 0
