#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace metasim::sim {

using Params = std::map<std::string, std::string>;

enum class ActorType { user, party };

struct ActorDecl {
    ActorType type = ActorType::user;
    std::string name;
    Params attrs;
    std::size_t line = 0;
};

enum class AccessPolicy { open, restricted };

struct WorldDecl {
    std::string id;
    AccessPolicy policy = AccessPolicy::open;
    std::string predicate;  // restricted worlds only
    std::vector<std::string> trusted_parties;
    std::size_t line = 0;
};

struct EventDecl {
    std::uint64_t at = 0;
    std::string kind;
    Params params;
    std::size_t line = 0;
};

// Declarative multi-world script. Together with `seed` it fully determines a run.
struct Scenario {
    std::string name;
    std::uint64_t seed = 0;
    std::string today = "2023-01-01";
    std::vector<ActorDecl> actors;
    std::vector<WorldDecl> worlds;
    std::vector<EventDecl> events;

    const ActorDecl* find_actor(std::string_view name) const;
    const WorldDecl* find_world(std::string_view id) const;
    std::size_t count(ActorType type) const;
};

// Event kinds understood by the runner, with their required and optional
// parameters. Parameters naming users, parties or worlds are resolved at load.
enum class RefKind { none, user, party, world, actor };

struct ParamSpec {
    std::string_view name;
    RefKind ref = RefKind::none;
    bool required = true;
};

struct EventSpec {
    std::string_view kind;
    std::vector<ParamSpec> params;
};
const std::vector<EventSpec>& event_specs();

// Errors: "parse-error" (message carries line and field), "unknown-actor-ref".
Scenario parse_scenario(std::string_view text, std::string name = "inline");

// Accepts a file path, or the name of a bundled scenario ("demo", "channels",
// "empty") when no such file exists. Error "scenario-not-found".
Scenario load_scenario(const std::string& path_or_name);

std::optional<std::string_view> bundled_scenario(std::string_view name);
std::vector<std::string> bundled_scenario_names();

}  // namespace metasim::sim
