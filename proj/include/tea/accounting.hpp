#pragma once

// Accounting on top of the shared record: inventory cost assignment
// (AVCO / FIFO / LIFO) and momentum reporting (wealth, momentum, force).

#include <deque>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "tea/views.hpp"

namespace tea {

enum class CostMethod { avco, fifo, lifo };

std::string_view to_string(CostMethod method) noexcept;
CostMethod parse_cost_method(std::string_view text);

struct ProfitRecord {
    std::optional<Digest> receipt_id;
    Amount sale_price = 0;
    Amount cogs = 0;
    Amount profit = 0;
};

/// Single-owner inventory of interchangeable units.
///
/// AVCO keeps (total value, count) and prices a sale at the truncated
/// integer average, so a residue of total_value mod count may remain.
/// FIFO and LIFO keep the unit costs in arrival order.
class Inventory {
public:
    explicit Inventory(CostMethod method, AgentId holder = {});

    /// Error: NonPositiveCost.
    void add_unit(Amount cost);
    /// Errors: EmptyInventory, SelfPurchase (buyer is the holder).
    ProfitRecord sell_unit(Amount price, const AgentId& buyer = {}, std::optional<Digest> receipt_id = std::nullopt);

    CostMethod method() const noexcept { return method_; }
    const AgentId& holder() const noexcept { return holder_; }
    Amount total_value() const noexcept;
    std::int64_t count() const noexcept;
    /// Unit costs in arrival order (FIFO/LIFO only; empty for AVCO).
    const std::deque<Amount>& unit_costs() const noexcept { return costs_; }
    /// AVCO truncation residue: total_value - count * (total_value / count).
    Amount residue() const noexcept;

private:
    CostMethod method_;
    AgentId holder_;
    Amount avco_value_ = 0;
    std::int64_t avco_count_ = 0;
    std::deque<Amount> costs_;
};

Inventory add_unit(Inventory inventory, Amount cost);
std::pair<Inventory, ProfitRecord> sell_unit(Inventory inventory, Amount price, const AgentId& buyer = {});

/// Splits `total` into `parts` integer shares summing exactly to `total`;
/// the first (total mod parts) shares carry one extra unit.
std::vector<Amount> split_amount(Amount total, std::int64_t parts);

struct ReplayResult {
    std::vector<ProfitRecord> profits;
    std::map<Digest, Amount> cogs_by_receipt;
    std::map<std::string, Inventory> inventories; // per goods resource
};

/// Replays a party's goods rows: inflows bought for currency become adds,
/// outflows sold for currency become sells. Only resources of kind good
/// are replayed; with `only_resource` set, just that one.
ReplayResult replay_inventory(const LedgerView& view, const ResourceCatalog& catalog, CostMethod method,
                              const std::optional<std::string>& only_resource = std::nullopt);

// --- momentum ---------------------------------------------------------------

using Rational = boost::rational<std::int64_t>;

struct WealthPoint {
    std::int64_t t = 0; // days
    Amount wealth = 0;
};

enum class Column { debit, credit, trebit };

std::string_view to_string(Column column) noexcept;

struct MomentumInterval {
    std::int64_t t_begin = 0;
    std::int64_t t_end = 0;
    Rational momentum;  // wealth change per day
    Rational income;    // momentum * duration
};

struct ReportLine {
    Column column;
    std::string label;
    Rational value;
};

struct MomentumReport {
    std::vector<WealthPoint> periods;
    std::vector<MomentumInterval> intervals;
    /// Change in momentum between consecutive intervals per day between
    /// their midpoints; one fewer than intervals.
    std::vector<Rational> forces;
    std::vector<ReportLine> lines;
};

/// Errors: InsufficientPoints (< 2), NonMonotonicTime.
MomentumReport momentum_report(std::span<const WealthPoint> series);

/// "t,wealth" rows; a non-numeric first line is treated as a header.
std::vector<WealthPoint> parse_wealth_csv(std::string_view text);
std::string format_rational(const Rational& value);
std::string format_report(const MomentumReport& report);

} // namespace tea
