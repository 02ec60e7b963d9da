#include "tea/receipt.hpp"

#include <charconv>

namespace tea {

namespace {

void encode_body(CanonicalWriter& w, const SignedReceipt& r, bool with_validators)
{
    w.unsigned_integer("seq", r.seq)
        .hex("prev_digest", r.prev_digest.hex())
        .timestamp("committed_at", r.committed_at);
    encode_fields(w, r.proposal);
    if (r.change) w.integer("change", *r.change);
    w.nested("offer_sig", r.offer_sig);
    if (r.accept_sig) w.nested("accept_sig", *r.accept_sig);
    if (with_validators) {
        w.unsigned_integer("validators", r.validator_sigs.size());
        for (std::size_t i = 0; i < r.validator_sigs.size(); ++i)
            w.nested("validator." + std::to_string(i), r.validator_sigs[i]);
    }
}

} // namespace

std::string_view to_string(Mode mode) noexcept
{
    switch (mode) {
    case Mode::joint_suite: return "joint_suite";
    case Mode::digital_cheque: return "digital_cheque";
    case Mode::digital_cash: return "digital_cash";
    }
    return "joint_suite";
}

Mode parse_mode(std::string_view text)
{
    if (text == "joint_suite" || text == "joint") return Mode::joint_suite;
    if (text == "digital_cheque" || text == "cheque") return Mode::digital_cheque;
    if (text == "digital_cash" || text == "cash") return Mode::digital_cash;
    fail(Errc::decode_error, "unknown mode '" + std::string(text) + "'");
}

std::string_view to_string(DraftState state) noexcept
{
    switch (state) {
    case DraftState::drafted: return "drafted";
    case DraftState::offered: return "offered";
    case DraftState::accepted: return "accepted";
    case DraftState::validated: return "validated";
    case DraftState::rejected: return "rejected";
    case DraftState::expired: return "expired";
    }
    return "drafted";
}

DraftState parse_draft_state(std::string_view text)
{
    for (auto s : {DraftState::drafted, DraftState::offered, DraftState::accepted, DraftState::validated,
                   DraftState::rejected, DraftState::expired})
        if (to_string(s) == text) return s;
    fail(Errc::decode_error, "unknown draft state '" + std::string(text) + "'");
}

std::string to_string(const Outpoint& outpoint)
{
    return outpoint.receipt_id.hex() + ":" + std::to_string(outpoint.index);
}

Outpoint parse_outpoint(std::string_view text)
{
    const auto colon = text.rfind(':');
    if (colon == std::string_view::npos) fail(Errc::decode_error, "outpoint must be <receipt>:<index>");
    Outpoint op;
    op.receipt_id = Digest::from_hex(text.substr(0, colon));
    const auto idx = text.substr(colon + 1);
    const auto [ptr, ec] = std::from_chars(idx.data(), idx.data() + idx.size(), op.index);
    if (ec != std::errc{} || ptr != idx.data() + idx.size()) fail(Errc::decode_error, "bad outpoint index");
    return op;
}

Amount CashTransaction::output_total() const noexcept
{
    Amount total = 0;
    for (const auto& o : outputs) total += o.amount;
    return total;
}

std::string party_payload(const Proposal& proposal)
{
    return canonical_encode(proposal);
}

std::string validator_payload(const SignedReceipt& receipt)
{
    CanonicalWriter w;
    encode_body(w, receipt, false);
    return std::move(w).str();
}

Digest compute_receipt_id(const SignedReceipt& receipt)
{
    CanonicalWriter w;
    encode_body(w, receipt, true);
    return Digest::of(w.str());
}

Digest receipt_digest(const SignedReceipt& receipt)
{
    return Digest::of(canonical_encode(receipt));
}

void encode_fields(CanonicalWriter& w, const Outpoint& outpoint)
{
    w.hex("receipt", outpoint.receipt_id.hex()).unsigned_integer("index", outpoint.index);
}

Outpoint decode_fields(CanonicalReader& r, std::type_identity<Outpoint>)
{
    Outpoint op;
    op.receipt_id = Digest::from_hex(r.hex("receipt"));
    const auto index = r.unsigned_integer("index");
    if (index > UINT32_MAX) fail(Errc::decode_error, "outpoint index out of range");
    op.index = static_cast<std::uint32_t>(index);
    return op;
}

void encode_fields(CanonicalWriter& w, const CashTransaction& tx)
{
    w.unsigned_integer("inputs", tx.inputs.size());
    for (std::size_t i = 0; i < tx.inputs.size(); ++i) w.nested("input." + std::to_string(i), tx.inputs[i]);
    w.unsigned_integer("outputs", tx.outputs.size());
    for (std::size_t i = 0; i < tx.outputs.size(); ++i) {
        const auto prefix = "output." + std::to_string(i) + ".";
        w.hex(prefix + "owner", tx.outputs[i].owner).integer(prefix + "amount", tx.outputs[i].amount);
    }
    w.integer("fee", tx.fee);
}

CashTransaction decode_fields(CanonicalReader& r, std::type_identity<CashTransaction>)
{
    CashTransaction tx;
    const auto inputs = r.unsigned_integer("inputs");
    for (std::uint64_t i = 0; i < inputs; ++i) tx.inputs.push_back(r.nested<Outpoint>("input." + std::to_string(i)));
    const auto outputs = r.unsigned_integer("outputs");
    for (std::uint64_t i = 0; i < outputs; ++i) {
        const auto prefix = "output." + std::to_string(i) + ".";
        CashOutput out;
        out.owner = r.hex(prefix + "owner");
        out.amount = r.integer(prefix + "amount");
        tx.outputs.push_back(std::move(out));
    }
    tx.fee = r.integer("fee");
    return tx;
}

void encode_fields(CanonicalWriter& w, const CoinbaseInfo& info)
{
    w.integer("minted", info.minted).integer("recycled_fees", info.recycled_fees);
}

CoinbaseInfo decode_fields(CanonicalReader& r, std::type_identity<CoinbaseInfo>)
{
    CoinbaseInfo info;
    info.minted = r.integer("minted");
    info.recycled_fees = r.integer("recycled_fees");
    return info;
}

void encode_fields(CanonicalWriter& w, const Proposal& proposal)
{
    w.hex("draft_id", proposal.draft_id).token("mode", to_string(proposal.mode));
    w.nested("entry", without_stubs(proposal.entry));
    if (proposal.cash) w.nested("cash", *proposal.cash);
    if (proposal.coinbase) w.nested("coinbase", *proposal.coinbase);
}

Proposal decode_fields(CanonicalReader& r, std::type_identity<Proposal>)
{
    Proposal p;
    p.draft_id = r.hex("draft_id");
    p.mode = parse_mode(r.token("mode"));
    p.entry = r.nested<SharedEntry>("entry");
    if (p.entry.payer_stub || p.entry.payee_stub) fail(Errc::decode_error, "stubs cannot appear in a signed entry");
    if (r.has_nested("cash")) p.cash = r.nested<CashTransaction>("cash");
    if (r.has_nested("coinbase")) p.coinbase = r.nested<CoinbaseInfo>("coinbase");
    return p;
}

void encode_fields(CanonicalWriter& w, const TransactionDraft& draft)
{
    w.token("state", to_string(draft.state))
        .timestamp("created_at", draft.created_at)
        .timestamp("expires_at", draft.expires_at);
    encode_fields(w, draft.proposal);
    if (draft.offer_sig) w.nested("offer_sig", *draft.offer_sig);
    if (draft.accept_sig) w.nested("accept_sig", *draft.accept_sig);
}

TransactionDraft decode_fields(CanonicalReader& r, std::type_identity<TransactionDraft>)
{
    TransactionDraft d;
    d.state = parse_draft_state(r.token("state"));
    d.created_at = r.timestamp("created_at");
    d.expires_at = r.timestamp("expires_at");
    d.proposal = decode_fields(r, std::type_identity<Proposal>{});
    if (r.has_nested("offer_sig")) d.offer_sig = r.nested<Signature>("offer_sig");
    if (r.has_nested("accept_sig")) d.accept_sig = r.nested<Signature>("accept_sig");
    return d;
}

void encode_fields(CanonicalWriter& w, const SignedReceipt& receipt)
{
    w.hex("receipt_id", receipt.receipt_id.hex());
    encode_body(w, receipt, true);
}

SignedReceipt decode_fields(CanonicalReader& r, std::type_identity<SignedReceipt>)
{
    SignedReceipt rc;
    rc.receipt_id = Digest::from_hex(r.hex("receipt_id"));
    rc.seq = r.unsigned_integer("seq");
    rc.prev_digest = Digest::from_hex(r.hex("prev_digest"));
    rc.committed_at = r.timestamp("committed_at");
    rc.proposal = decode_fields(r, std::type_identity<Proposal>{});
    if (r.has("change")) rc.change = r.integer("change");
    rc.offer_sig = r.nested<Signature>("offer_sig");
    if (r.has_nested("accept_sig")) rc.accept_sig = r.nested<Signature>("accept_sig");
    const auto count = r.unsigned_integer("validators");
    for (std::uint64_t i = 0; i < count; ++i)
        rc.validator_sigs.push_back(r.nested<Signature>("validator." + std::to_string(i)));
    return rc;
}

} // namespace tea
