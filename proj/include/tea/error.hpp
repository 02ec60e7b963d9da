#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tea {

enum class Errc {
    unencodable_value,
    decode_error,
    invalid_encoding,
    key_invalid,
    malformed_key,
    malformed_signature,
    agent_mismatch,
    invariant_violation,
    not_a_party,
    wrong_state,
    expired,
    signature_invalid,
    double_spend,
    quorum_not_met,
    conflict,
    chain_broken,
    missing_receiver_signature,
    insufficient_input,
    unknown_outpoint,
    not_owner,
    not_payee,
    not_validator,
    unknown_dimension,
    unmapped_resource_kind,
    non_positive_cost,
    empty_inventory,
    self_purchase,
    insufficient_points,
    non_monotonic_time,
    script_invalid,
    io_error,
};

std::string_view errc_name(Errc code) noexcept;
std::optional<Errc> parse_errc(std::string_view name) noexcept;

/// Every failure raised by the library carries one of the Errc codes above.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& message);

} // namespace tea
