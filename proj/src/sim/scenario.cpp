#include "metasim/sim/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "metasim/credential.hpp"
#include "metasim/error.hpp"

namespace metasim::sim {

const ActorDecl* Scenario::find_actor(std::string_view name) const {
    for (const auto& a : actors)
        if (a.name == name)
            return &a;
    return nullptr;
}

const WorldDecl* Scenario::find_world(std::string_view id) const {
    for (const auto& w : worlds)
        if (w.id == id)
            return &w;
    return nullptr;
}

std::size_t Scenario::count(ActorType type) const {
    return static_cast<std::size_t>(std::count_if(
            actors.begin(), actors.end(), [&](const ActorDecl& a) { return a.type == type; }));
}

const std::vector<EventSpec>& event_specs() {
    using R = RefKind;
    static const std::vector<EventSpec> specs = {
            {"mint", {{"user", R::user}, {"prekeys", R::none, false}}},
            {"publish-prekeys", {{"user", R::user}, {"count", R::none}}},
            {"attest",
             {{"party", R::party},
              {"user", R::user},
              {"predicate", R::none},
              {"publish", R::none, false}}},
            {"authenticate", {{"user", R::user}, {"world", R::world}}},
            {"migrate", {{"user", R::user}, {"from", R::world}, {"to", R::world}}},
            {"open-channel", {{"from", R::user}, {"to", R::user}, {"tp", R::party, false}}},
            {"message",
             {{"from", R::user},
              {"to", R::user},
              {"text", R::none},
              {"tamper", R::none, false},
              {"replay", R::none, false}}},
            {"exchange-contacts",
             {{"a", R::user}, {"b", R::user}, {"label_a", R::none, false},
              {"label_b", R::none, false}}},
            {"endorse", {{"by", R::user}, {"subject", R::user}, {"target", R::user}}},
            {"impersonate",
             {{"attacker", R::user}, {"victim", R::user}, {"observer", R::user},
              {"mode", R::none, false}}},
            {"meet", {{"observer", R::user}, {"subject", R::user}}},
            {"remove-party", {{"party", R::party}}},
            {"rotate-key", {{"actor", R::actor}}},
    };
    return specs;
}

namespace {

[[noreturn]] void fail(const std::string& code, std::size_t line, const std::string& msg) {
    throw Error(code, "line " + std::to_string(line) + ": " + msg);
}

bool valid_name(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '_' || c == '-';
    });
}

bool valid_value(std::string_view s) {
    return s.find('|') == std::string_view::npos;
}

// Splits on whitespace; double quotes group a value containing spaces. A '#'
// outside quotes starts a comment.
std::vector<std::string> tokenize(std::string_view line, std::size_t line_no) {
    std::vector<std::string> out;
    std::string cur;
    bool in_quotes = false, have = false;
    for (char c : line) {
        if (in_quotes) {
            if (c == '"')
                in_quotes = false;
            else
                cur.push_back(c);
            continue;
        }
        if (c == '#')
            break;
        if (c == '"') {
            in_quotes = true;
            have = true;
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            if (have)
                out.push_back(std::move(cur));
            cur.clear();
            have = false;
        } else {
            cur.push_back(c);
            have = true;
        }
    }
    if (in_quotes)
        fail("parse-error", line_no, "unterminated quote");
    if (have)
        out.push_back(std::move(cur));
    return out;
}

Params parse_params(const std::vector<std::string>& tokens, std::size_t first, std::size_t line) {
    Params out;
    for (std::size_t i = first; i < tokens.size(); ++i) {
        auto eq = tokens[i].find('=');
        if (eq == std::string::npos || eq == 0)
            fail("parse-error", line, "expected key=value, got '" + tokens[i] + "'");
        auto key = tokens[i].substr(0, eq);
        auto value = tokens[i].substr(eq + 1);
        if (!valid_value(value))
            fail("parse-error", line, "field '" + key + "': '|' is not allowed");
        if (!out.emplace(key, value).second)
            fail("parse-error", line, "field '" + key + "' given twice");
    }
    return out;
}

std::uint64_t parse_u64(const std::string& s, std::size_t line, const std::string& field) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        fail("parse-error", line, "field '" + field + "': expected unsigned integer");
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep))
        if (!cur.empty())
            out.push_back(cur);
    return out;
}

bool valid_date(const std::string& s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-')
        return false;
    for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u})
        if (!std::isdigit(static_cast<unsigned char>(s[i])))
            return false;
    return true;
}

void check_user_attrs(const ActorDecl& a) {
    for (const auto& [k, v] : a.attrs) {
        if (k == "appearance") {
            for (const auto& pair : split(v, ',')) {
                auto colon = pair.find(':');
                if (colon == std::string::npos || colon == 0)
                    fail("parse-error", a.line, "field 'appearance': expected key:value list");
            }
        } else if (k == "birthdate" && !valid_date(v)) {
            fail("parse-error", a.line, "field 'birthdate': expected YYYY-MM-DD");
        }
    }
}

void resolve_ref(const Scenario& s, const EventDecl& e, const ParamSpec& spec,
                 const std::string& value) {
    auto bad = [&](const std::string& what) {
        fail("unknown-actor-ref", e.line,
             "field '" + std::string(spec.name) + "': no " + what + " named '" + value + "'");
    };
    switch (spec.ref) {
        case RefKind::none: return;
        case RefKind::world:
            if (!s.find_world(value))
                bad("world");
            return;
        case RefKind::user: {
            auto* a = s.find_actor(value);
            if (!a || a->type != ActorType::user)
                bad("user");
            return;
        }
        case RefKind::party: {
            auto* a = s.find_actor(value);
            if (!a || a->type != ActorType::party)
                bad("party");
            return;
        }
        case RefKind::actor:
            if (!s.find_actor(value))
                bad("actor");
            return;
    }
}

void validate_event(const Scenario& s, const EventDecl& e) {
    const auto& specs = event_specs();
    auto it = std::find_if(specs.begin(), specs.end(),
                           [&](const EventSpec& spec) { return spec.kind == e.kind; });
    if (it == specs.end())
        fail("parse-error", e.line, "unknown event kind '" + e.kind + "'");

    for (const auto& [key, value] : e.params) {
        auto p = std::find_if(it->params.begin(), it->params.end(),
                              [&](const ParamSpec& ps) { return ps.name == key; });
        if (p == it->params.end())
            fail("parse-error", e.line, "field '" + key + "': not a parameter of " + e.kind);
    }
    for (const auto& p : it->params) {
        auto v = e.params.find(std::string(p.name));
        if (v == e.params.end()) {
            if (p.required)
                fail("parse-error", e.line, "field '" + std::string(p.name) + "': missing");
            continue;
        }
        resolve_ref(s, e, p, v->second);
    }

    for (const char* numeric : {"prekeys", "count"})
        if (auto v = e.params.find(numeric); v != e.params.end())
            parse_u64(v->second, e.line, numeric);
    if (e.kind == "attest" && !PredicateRegistry{}.contains(e.params.at("predicate")))
        fail("parse-error", e.line, "field 'predicate': unknown predicate");
    for (const char* flag : {"publish", "tamper", "replay"})
        if (auto v = e.params.find(flag); v != e.params.end() && v->second != "yes" &&
                                          v->second != "no")
            fail("parse-error", e.line, std::string("field '") + flag + "': expected yes|no");
    if (auto v = e.params.find("mode"); v != e.params.end() && v->second != "own-nft" &&
                                        v->second != "claim-victim")
        fail("parse-error", e.line, "field 'mode': expected own-nft|claim-victim");
}

}  // namespace

Scenario parse_scenario(std::string_view text, std::string name) {
    Scenario s;
    s.name = std::move(name);
    enum class Section { none, actors, worlds, events } section = Section::none;
    std::set<std::string> names;

    std::size_t line_no = 0, pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos)
            end = text.size();
        auto line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;

        auto tokens = tokenize(line, line_no);
        if (tokens.empty())
            continue;

        const auto& head = tokens[0];
        if (head.front() == '[') {
            if (tokens.size() != 1)
                fail("parse-error", line_no, "unexpected text after section header");
            if (head == "[actors]")
                section = Section::actors;
            else if (head == "[worlds]")
                section = Section::worlds;
            else if (head == "[events]")
                section = Section::events;
            else
                fail("parse-error", line_no, "unknown section " + head);
            continue;
        }

        switch (section) {
            case Section::none: {
                if (tokens.size() != 2)
                    fail("parse-error", line_no, "expected '<directive> <value>'");
                if (head == "scenario") {
                    if (!valid_name(tokens[1]))
                        fail("parse-error", line_no, "field 'scenario': bad name");
                    s.name = tokens[1];
                } else if (head == "seed") {
                    s.seed = parse_u64(tokens[1], line_no, "seed");
                } else if (head == "today") {
                    if (!valid_date(tokens[1]))
                        fail("parse-error", line_no, "field 'today': expected YYYY-MM-DD");
                    s.today = tokens[1];
                } else {
                    fail("parse-error", line_no, "unknown directive '" + head + "'");
                }
                break;
            }
            case Section::actors: {
                if (tokens.size() < 2 || (head != "user" && head != "party"))
                    fail("parse-error", line_no, "expected 'user|party <name> [key=value...]'");
                ActorDecl a;
                a.type = head == "user" ? ActorType::user : ActorType::party;
                a.name = tokens[1];
                a.line = line_no;
                if (!valid_name(a.name) || a.name == "ledger")
                    fail("parse-error", line_no, "field 'name': bad actor name '" + a.name + "'");
                if (!names.insert(a.name).second)
                    fail("parse-error", line_no, "field 'name': duplicate name '" + a.name + "'");
                a.attrs = parse_params(tokens, 2, line_no);
                if (a.type == ActorType::user)
                    check_user_attrs(a);
                s.actors.push_back(std::move(a));
                break;
            }
            case Section::worlds: {
                if (tokens.size() < 3 || head != "world")
                    fail("parse-error", line_no, "expected 'world <id> open|restricted ...'");
                WorldDecl w;
                w.id = tokens[1];
                w.line = line_no;
                if (!valid_name(w.id) || w.id == "ledger")
                    fail("parse-error", line_no, "field 'id': bad world id '" + w.id + "'");
                if (!names.insert(w.id).second)
                    fail("parse-error", line_no, "field 'id': duplicate name '" + w.id + "'");
                if (tokens[2] == "open")
                    w.policy = AccessPolicy::open;
                else if (tokens[2] == "restricted")
                    w.policy = AccessPolicy::restricted;
                else
                    fail("parse-error", line_no, "field 'policy': expected open|restricted");
                auto params = parse_params(tokens, 3, line_no);
                for (const auto& [k, v] : params) {
                    if (k == "predicate")
                        w.predicate = v;
                    else if (k == "trust")
                        w.trusted_parties = split(v, ',');
                    else
                        fail("parse-error", line_no, "field '" + k + "': not a world field");
                }
                if (w.policy == AccessPolicy::restricted) {
                    if (w.predicate.empty())
                        fail("parse-error", line_no, "field 'predicate': missing");
                    if (!PredicateRegistry{}.contains(w.predicate))
                        fail("parse-error", line_no, "field 'predicate': unknown predicate");
                } else if (!w.predicate.empty()) {
                    fail("parse-error", line_no, "field 'predicate': open worlds take none");
                }
                s.worlds.push_back(std::move(w));
                break;
            }
            case Section::events: {
                if (tokens.size() < 2)
                    fail("parse-error", line_no, "expected '<tick> <kind> [key=value...]'");
                EventDecl e;
                e.at = parse_u64(head, line_no, "tick");
                e.kind = tokens[1];
                e.line = line_no;
                e.params = parse_params(tokens, 2, line_no);
                s.events.push_back(std::move(e));
                break;
            }
        }
    }

    // References are resolved after the whole file is read so sections may
    // appear in any order.
    for (const auto& w : s.worlds)
        for (const auto& tp : w.trusted_parties) {
            auto* a = s.find_actor(tp);
            if (!a || a->type != ActorType::party)
                fail("unknown-actor-ref", w.line, "field 'trust': no party named '" + tp + "'");
        }
    for (const auto& e : s.events)
        validate_event(s, e);
    return s;
}

Scenario load_scenario(const std::string& path_or_name) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (fs::is_regular_file(path_or_name, ec)) {
        std::ifstream in(path_or_name, std::ios::binary);
        if (!in)
            throw Error("scenario-not-found", path_or_name);
        std::ostringstream buf;
        buf << in.rdbuf();
        return parse_scenario(buf.str(), fs::path(path_or_name).stem().string());
    }
    if (auto text = bundled_scenario(path_or_name))
        return parse_scenario(*text, path_or_name);
    throw Error("scenario-not-found", path_or_name);
}

}  // namespace metasim::sim
