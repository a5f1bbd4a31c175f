#pragma once

#include <stdexcept>
#include <string>

namespace metasim {

// Every failure carries a stable, machine-readable code (e.g. "nft-exists").
// Codes are part of the wire vocabulary and appear verbatim in transcripts.
class Error : public std::runtime_error {
  public:
    explicit Error(std::string code, const std::string& detail = {})
        : std::runtime_error(detail.empty() ? code : code + ": " + detail),
          code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

  private:
    std::string code_;
};

}  // namespace metasim
