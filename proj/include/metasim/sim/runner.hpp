#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "metasim/contact_book.hpp"
#include "metasim/credential.hpp"
#include "metasim/crypto.hpp"
#include "metasim/error.hpp"
#include "metasim/ledger.hpp"
#include "metasim/sim/scenario.hpp"
#include "metasim/sim/transcript.hpp"
#include "metasim/wallet.hpp"

namespace metasim::sim {

// Raised when a run violates one of the simulator's global invariants
// (credential silos, soulbound ownership, single identity, avatar portability).
class InvariantBreach : public Error {
  public:
    explicit InvariantBreach(const std::string& detail) : Error("invariant-breach", detail) {}
};

// Deterministic single-threaded discrete-event run of a scenario. Every event
// goes through the real protocol modules; all randomness comes from one
// mt19937_64 seeded with the scenario seed. Messages are delivered in order
// with unit latency; ledger reads and writes appear as messages to "ledger".
class Simulation {
  public:
    Simulation(Scenario scenario, const CryptoProvider& crypto);
    ~Simulation();
    Simulation(const Simulation&) = delete;
    Simulation& operator=(const Simulation&) = delete;

    // Executes the setup and every scripted event once. Event failures become
    // recorded outcomes; only InvariantBreach escapes.
    const Transcript& run();

    // Echo each record to `out` as it is appended.
    void set_verbose(std::ostream* out);

    const Transcript& transcript() const;
    const Ledger& ledger() const;
    const Scenario& scenario() const;

    std::vector<std::string> world_ids() const;
    // Canonical encoding of everything a world stores.
    Bytes world_state(std::string_view world_id) const;

    const Wallet& wallet(std::string_view actor) const;
    const AvatarProfile& avatar(std::string_view user) const;
    const std::vector<AttestationCertificate>& issued_certificates() const;

    // Field audit of every world's state against user secrets: private keys
    // (identity and prekey), certificate bodies and private attribute values.
    // Returns one description per violation.
    std::vector<std::string> audit_worlds() const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

Transcript run_scenario(const Scenario& scenario, const CryptoProvider& crypto = provider_from_env());

}  // namespace metasim::sim
