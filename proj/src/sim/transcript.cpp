#include "metasim/sim/transcript.hpp"

#include <charconv>

#include "metasim/canonical.hpp"
#include "metasim/error.hpp"

namespace metasim::sim {

Bytes encode_message_detail(const MessageDetail& m) {
    return Encoder{}.str(m.from).str(m.to).str(m.type).bytes(m.payload).take();
}

MessageDetail decode_message_detail(ByteView detail) {
    Decoder d(detail);
    MessageDetail m;
    m.from = d.str();
    m.to = d.str();
    m.type = d.str();
    m.payload = d.bytes();
    d.expect_end();
    return m;
}

TranscriptRecord& Transcript::append(std::uint64_t time, std::string actor, std::string event,
                                     Bytes detail, std::string outcome) {
    records_.push_back(TranscriptRecord{records_.size() + 1, time, std::move(actor),
                                        std::move(event), std::move(detail), std::move(outcome)});
    return records_.back();
}

std::string Transcript::serialize() const {
    std::string out;
    for (const auto& r : records_) {
        out += std::to_string(r.seq);
        out += '|';
        out += std::to_string(r.time);
        out += '|';
        out += r.actor;
        out += '|';
        out += r.event;
        out += '|';
        out += to_hex(r.detail);
        out += '|';
        out += r.outcome;
        out += '\n';
    }
    return out;
}

namespace {

std::uint64_t parse_field_u64(std::string_view s, std::size_t line) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw Error("bad-transcript", "line " + std::to_string(line) + ": bad integer");
    return v;
}

}  // namespace

Transcript Transcript::parse(std::string_view text) {
    Transcript t;
    std::size_t pos = 0, line_no = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos)
            end = text.size();
        auto line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (line.empty())
            continue;

        std::vector<std::string_view> fields;
        std::size_t start = 0;
        for (int i = 0; i < 5; ++i) {
            auto bar = line.find('|', start);
            if (bar == std::string_view::npos)
                throw Error("bad-transcript", "line " + std::to_string(line_no) + ": expected 6 fields");
            fields.push_back(line.substr(start, bar - start));
            start = bar + 1;
        }
        fields.push_back(line.substr(start));

        TranscriptRecord r;
        r.seq = parse_field_u64(fields[0], line_no);
        r.time = parse_field_u64(fields[1], line_no);
        r.actor = fields[2];
        r.event = fields[3];
        try {
            r.detail = from_hex(fields[4]);
        } catch (const Error&) {
            throw Error("bad-transcript", "line " + std::to_string(line_no) + ": bad detail hex");
        }
        r.outcome = fields[5];
        if (r.seq != t.records_.size() + 1)
            throw Error("bad-transcript", "line " + std::to_string(line_no) + ": sequence gap");
        t.records_.push_back(std::move(r));
    }
    return t;
}

std::vector<std::string> Transcript::outcome_lines() const {
    std::vector<std::string> out;
    for (const auto& r : records_)
        if (!r.is_message())
            out.push_back(r.event + " " + r.actor + " " + r.outcome);
    return out;
}

}  // namespace metasim::sim
