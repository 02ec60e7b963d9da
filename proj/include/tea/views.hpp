#pragma once

// Per-party projections of the shared record: sheets, balances folded
// from receipts, hypercube pivots, and double-entry journal export.

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tea/str.hpp"

namespace tea {

enum class Direction { inflow, outflow };

std::string_view to_string(Direction direction) noexcept;

struct ViewRow {
    Digest receipt_id;
    Direction direction = Direction::inflow;
    std::string resource_id;
    Amount quantity = 0;
    AgentId counterparty;
    std::optional<std::string> local_stub;
    // Context carried for pivots and journal mapping.
    Timestamp occurred_at = 0;
    std::string purpose; // exchange | payment | coinbase
    std::optional<std::string> counter_resource; // the dual leg, if any
    Amount counter_quantity = 0;

    Amount signed_quantity() const noexcept { return direction == Direction::inflow ? quantity : -quantity; }
};

/// One party's sheet of the shared record.
struct LedgerView {
    AgentId party;
    std::vector<ViewRow> rows;
};

/// A party's private annotations, keyed by receipt.
using StubBook = std::map<Digest, std::string>;

LedgerView project(const ReceiptLog& log, const AgentId& party, const StubBook& stubs = {},
                   const ChainPolicy& policy = {});

Amount balance(const ReceiptLog& log, const AgentId& party, std::string_view resource_id,
               const ChainPolicy& policy = {});

using BalanceKey = std::pair<AgentId, std::string>; // (party, resource)

/// Every (party, resource) balance in one verified pass over the log.
std::map<BalanceKey, Amount> fold_balances(const ReceiptLog& log, const ChainPolicy& policy = {});

/// Balances updated in place, one receipt at a time.
class BalanceBook {
public:
    void apply(const SignedReceipt& receipt);
    Amount balance(const AgentId& party, std::string_view resource_id) const;
    const std::map<BalanceKey, Amount>& balances() const noexcept { return balances_; }

private:
    std::map<BalanceKey, Amount> balances_;
};

enum class PivotDim { party, resource, period, purpose };

std::string_view to_string(PivotDim dim) noexcept;
/// Comma-separated dimension names. Error: UnknownDimension.
std::vector<PivotDim> parse_dims(std::string_view csv);

struct PivotCell {
    std::vector<std::string> keys; // one per requested dimension, same order
    Amount total = 0;

    friend bool operator==(const PivotCell&, const PivotCell&) = default;
};

/// Grouped signed totals over every party's rows. Cells come out in key order.
std::vector<PivotCell> pivot(const ReceiptLog& log, std::span<const PivotDim> dims, const ChainPolicy& policy = {});

/// "YYYY-MM" in UTC.
std::string calendar_month(Timestamp t);

struct Posting {
    std::string account;
    Amount amount = 0;

    friend bool operator==(const Posting&, const Posting&) = default;
};

struct JournalEntry {
    Digest receipt_id;
    std::string resource_id;
    Posting debit;
    Posting credit;
};

/// Cost of a goods outflow; nullopt falls back to the consideration received.
using CostLookup = std::function<std::optional<Amount>(const ViewRow& row)>;

/// Fixed chart:
///   currency in,  sale            Dr Cash        / Cr Sales
///   currency in,  unpaired        Dr Cash        / Cr Payable
///   currency out, purchase        Dr Purchases   / Cr Cash
///   currency out, unpaired        Dr Receivable  / Cr Cash
///   currency in/out, fx           Dr Cash / Cr Exchange, Dr Exchange / Cr Cash
///   good in,  bought for currency Dr Inventory   / Cr Purchases
///   good out, sold for currency   Dr COGS        / Cr Inventory
/// Anything else raises UnmappedResourceKind.
std::vector<JournalEntry> export_double_entry(const LedgerView& view, const ResourceCatalog& catalog,
                                              const CostLookup& cost_of_goods = {});

/// CSV: receipt_id,resource_id,debit_account,debit_amount,credit_account,credit_amount
std::string journal_csv(const std::vector<JournalEntry>& journal);

} // namespace tea
