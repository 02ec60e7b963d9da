#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace tea;

namespace {

Errc code_of(auto&& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return Errc::io_error;
}

} // namespace

TEST_SUITE("views")
{
    TEST_CASE("Alice's view of the bicycle trades")
    {
        test::World w;
        w.bicycle();
        const auto log = w.str.log_snapshot();
        const auto v = project(log, w.alice.key_id);
        REQUIRE(v.rows.size() == 6);
        std::multiset<std::tuple<std::string, Direction, Amount>> got;
        for (const auto& r : v.rows) got.insert({r.resource_id, r.direction, r.quantity});
        const std::multiset<std::tuple<std::string, Direction, Amount>> want{
            {"bicycle", Direction::inflow, 1}, {"bicycle", Direction::inflow, 1},  {"USD", Direction::outflow, 7000},
            {"USD", Direction::outflow, 8000}, {"bicycle", Direction::outflow, 1}, {"USD", Direction::inflow, 10000}};
        CHECK(got == want);
        for (const auto& r : v.rows) CHECK(r.purpose == "exchange");
    }

    TEST_CASE("balances")
    {
        test::World w;
        CHECK(project(ReceiptLog{}, w.alice.key_id).rows.empty());
        w.bicycle();
        const auto log = w.str.log_snapshot();
        CHECK(balance(log, w.alice.key_id, "USD") == -5000);
        CHECK(balance(log, w.alice.key_id, "bicycle") == 1);
        CHECK(balance(log, w.bob.key_id, "USD") == 15000);
        CHECK(balance(log, derive_keypair(1, "dave").key_id, "USD") == 0);
    }

    TEST_CASE("views refuse a broken chain")
    {
        test::World w;
        w.bicycle();
        auto receipts = w.str.log_snapshot().receipts();
        receipts[1].proposal.entry.events[0].quantity = 1;
        CHECK(code_of([&] { project(ReceiptLog::from_unchecked(receipts), w.alice.key_id); }) == Errc::chain_broken);
    }

    TEST_CASE("stubs appear only in the owner's view")
    {
        test::World w;
        w.bicycle();
        const auto log = w.str.log_snapshot();
        const StubBook stubs{{log.receipts()[2].receipt_id, "sold to Charlie"}};
        const auto mine = project(log, w.alice.key_id, stubs);
        const auto theirs = project(log, w.charlie.key_id);
        int stubbed = 0;
        for (const auto& r : mine.rows) stubbed += r.local_stub.has_value();
        CHECK(stubbed == 2);
        for (const auto& r : theirs.rows) CHECK_FALSE(r.local_stub);
    }

    TEST_CASE("counterparty views mirror each other")
    {
        test::World w;
        w.five_receipts();
        const auto log = w.str.log_snapshot();
        const auto a = project(log, w.alice.key_id);
        const auto b = project(log, w.bob.key_id);
        std::multiset<std::tuple<Digest, std::string, Amount, Direction>> from_alice, from_bob;
        for (const auto& r : a.rows)
            if (r.counterparty == w.bob.key_id) from_alice.insert({r.receipt_id, r.resource_id, r.quantity, r.direction});
        for (const auto& r : b.rows)
            if (r.counterparty == w.alice.key_id)
                from_bob.insert({r.receipt_id, r.resource_id, r.quantity,
                                 r.direction == Direction::inflow ? Direction::outflow : Direction::inflow});
        CHECK(from_alice.size() == 4);
        CHECK(from_alice == from_bob);
    }

    TEST_CASE("pivots")
    {
        test::World w;
        w.bicycle();
        const auto log = w.str.log_snapshot();
        const auto by_party_resource = pivot(log, parse_dims("party,resource"));
        int non_zero = 0;
        for (const auto& c : by_party_resource) non_zero += c.total != 0;
        CHECK(non_zero == 6);

        const auto grand = pivot(log, {});
        REQUIRE(grand.size() == 1);
        CHECK(grand[0].keys.empty());
        CHECK(grand[0].total == 0);

        const auto by_period = pivot(log, parse_dims("period"));
        REQUIRE(by_period.size() == 3);
        CHECK(by_period[0].keys[0] == "2019-03");
        CHECK(by_period[1].keys[0] == "2019-04");
        CHECK(by_period[2].keys[0] == "2020-01");

        CHECK(code_of([&] { parse_dims("party,colour"); }) == Errc::unknown_dimension);
    }

    TEST_CASE("property: pivot cells partition the rows")
    {
        test::World w;
        w.five_receipts();
        const auto log = w.str.log_snapshot();
        Amount rows_total = 0;
        std::set<AgentId> parties{w.alice.key_id, w.bob.key_id, w.charlie.key_id};
        for (const auto& p : parties)
            for (const auto& r : project(log, p).rows) rows_total += r.signed_quantity();
        for (const auto* dims : {"", "party", "resource", "period", "purpose", "party,resource,period,purpose"}) {
            Amount cells = 0;
            for (const auto& c : pivot(log, parse_dims(dims))) cells += c.total;
            CHECK(cells == rows_total);
        }
        Amount usd = 0;
        for (const auto& c : pivot(log, parse_dims("resource")))
            if (c.keys[0] == "USD") usd = c.total;
        CHECK(usd == 0);
    }

    TEST_CASE("calendar months")
    {
        CHECK(calendar_month(0) == "1970-01");
        CHECK(calendar_month(test::march_2019) == "2019-03");
        CHECK(calendar_month(test::march_2019 - 1) == "2019-02");
        CHECK(calendar_month(951782400) == "2000-02"); // 2000-02-29
    }

    TEST_CASE("fold equals the incremental book")
    {
        test::World w;
        w.five_receipts();
        const auto log = w.str.log_snapshot();
        BalanceBook book;
        for (const auto& r : log.receipts()) book.apply(r);
        CHECK(book.balances() == fold_balances(log));
        CHECK(fold_balances(log) == oracle::balances(log.receipts()));
    }

    TEST_CASE("double-entry export")
    {
        test::World w;
        w.bicycle();
        const auto log = w.str.log_snapshot();
        const auto catalog = test::bicycle_catalog();
        CHECK(export_double_entry(LedgerView{w.alice.key_id, {}}, catalog).empty());

        const auto journal = export_double_entry(project(log, w.alice.key_id), catalog);
        REQUIRE(journal.size() == 6);
        const auto sale_id = log.receipts()[2].receipt_id;
        bool found_sale = false;
        for (const auto& je : journal) {
            CHECK(je.debit.amount == je.credit.amount);
            if (je.receipt_id == sale_id && je.resource_id == "USD") {
                CHECK(je.debit == Posting{"Cash", 10000});
                CHECK(je.credit == Posting{"Sales", 10000});
                found_sale = true;
            }
        }
        CHECK(found_sale);

        const auto csv = journal_csv(journal);
        CHECK(csv.rfind("receipt_id,resource_id,debit_account,debit_amount,credit_account,credit_amount\n", 0) == 0);

        ResourceCatalog partial;
        partial.add({"USD", ResourceKind::currency, std::nullopt, "cent"});
        CHECK(code_of([&] { export_double_entry(project(log, w.alice.key_id), partial); }) ==
              Errc::unmapped_resource_kind);
    }

    TEST_CASE("property: random exports balance")
    {
        std::mt19937_64 rng(21);
        test::World w;
        const KeyPair* parties[] = {&w.alice, &w.bob, &w.charlie};
        for (int i = 0; i < 60; ++i) {
            const auto& a = *parties[rng() % 3];
            const KeyPair* b = parties[rng() % 3];
            while (b == &a) b = parties[rng() % 3];
            const bool goods = rng() % 2;
            w.exchange(a, *b, "USD", 1 + static_cast<Amount>(rng() % 9000), goods ? "bicycle" : "EUR",
                       goods ? 1 + static_cast<Amount>(rng() % 3) : 1 + static_cast<Amount>(rng() % 9000),
                       "r" + std::to_string(i));
            w.clock->advance(60);
        }
        const auto log = w.str.log_snapshot();
        for (const auto* p : parties) {
            Amount debits = 0, credits = 0;
            for (const auto& je : export_double_entry(project(log, p->key_id), test::bicycle_catalog())) {
                debits += je.debit.amount;
                credits += je.credit.amount;
            }
            CHECK(debits == credits);
        }
    }
}
