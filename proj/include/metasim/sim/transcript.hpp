#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "metasim/bytes.hpp"

namespace metasim::sim {

// One line of a run log. Message records use event names prefixed "msg:";
// their detail is canonical(from, to, type, payload).
struct TranscriptRecord {
    std::uint64_t seq = 0;
    std::uint64_t time = 0;
    std::string actor;
    std::string event;
    Bytes detail;
    std::string outcome;
    bool operator==(const TranscriptRecord&) const = default;

    bool is_message() const { return event.rfind("msg:", 0) == 0; }
};

// Decoded detail of a message record.
struct MessageDetail {
    std::string from;
    std::string to;
    std::string type;
    Bytes payload;
};

Bytes encode_message_detail(const MessageDetail& m);
MessageDetail decode_message_detail(ByteView detail);

class Transcript {
  public:
    TranscriptRecord& append(std::uint64_t time, std::string actor, std::string event, Bytes detail,
                             std::string outcome);

    const std::vector<TranscriptRecord>& records() const { return records_; }
    std::size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }

    // Line-delimited `seq|time|actor|event|detail-hex|outcome`.
    std::string serialize() const;
    // Error "bad-transcript" with the line number on malformed input.
    static Transcript parse(std::string_view text);

    // Script-level records only (no messages), rendered `event actor outcome`.
    std::vector<std::string> outcome_lines() const;

    bool operator==(const Transcript&) const = default;

  private:
    std::vector<TranscriptRecord> records_;
};

}  // namespace metasim::sim
