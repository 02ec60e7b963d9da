#include "tea/error.hpp"

namespace tea {

std::string_view errc_name(Errc code) noexcept
{
    switch (code) {
    case Errc::unencodable_value: return "UnencodableValue";
    case Errc::decode_error: return "DecodeError";
    case Errc::invalid_encoding: return "InvalidEncoding";
    case Errc::key_invalid: return "KeyInvalid";
    case Errc::malformed_key: return "MalformedKey";
    case Errc::malformed_signature: return "MalformedSignature";
    case Errc::agent_mismatch: return "AgentMismatch";
    case Errc::invariant_violation: return "InvariantViolation";
    case Errc::not_a_party: return "NotAParty";
    case Errc::wrong_state: return "WrongState";
    case Errc::expired: return "Expired";
    case Errc::signature_invalid: return "SignatureInvalid";
    case Errc::double_spend: return "DoubleSpend";
    case Errc::quorum_not_met: return "QuorumNotMet";
    case Errc::conflict: return "Conflict";
    case Errc::chain_broken: return "ChainBroken";
    case Errc::missing_receiver_signature: return "MissingReceiverSignature";
    case Errc::insufficient_input: return "InsufficientInput";
    case Errc::unknown_outpoint: return "UnknownOutpoint";
    case Errc::not_owner: return "NotOwner";
    case Errc::not_payee: return "NotPayee";
    case Errc::not_validator: return "NotValidator";
    case Errc::unknown_dimension: return "UnknownDimension";
    case Errc::unmapped_resource_kind: return "UnmappedResourceKind";
    case Errc::non_positive_cost: return "NonPositiveCost";
    case Errc::empty_inventory: return "EmptyInventory";
    case Errc::self_purchase: return "SelfPurchase";
    case Errc::insufficient_points: return "InsufficientPoints";
    case Errc::non_monotonic_time: return "NonMonotonicTime";
    case Errc::script_invalid: return "ScriptInvalid";
    case Errc::io_error: return "IoError";
    }
    return "Unknown";
}

std::optional<Errc> parse_errc(std::string_view name) noexcept
{
    for (int i = 0; i <= static_cast<int>(Errc::io_error); ++i)
        if (errc_name(static_cast<Errc>(i)) == name) return static_cast<Errc>(i);
    return std::nullopt;
}

void fail(Errc code, const std::string& message)
{
    throw Error(code, std::string(errc_name(code)) + ": " + message);
}

} // namespace tea
