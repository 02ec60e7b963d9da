#include <doctest.h>

#include <atomic>
#include <thread>

#include "fixtures.hpp"

using namespace tea;
using test::event;

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

struct CashWorld : test::World {
    CashWorld() : test::World(Mode::digital_cash) {}

    TransactionDraft spend_draft(const KeyPair& spender, std::vector<Outpoint> inputs, const KeyPair& payee,
                                 Amount amount, Amount fee, const std::string& id)
    {
        CashTransaction tx{std::move(inputs), {{payee.key_id, amount}}, fee};
        auto entry = make_cash_entry(spender.key_id, tx, "COIN", id, clock->now());
        return str.offer(std::move(entry), spender, tx);
    }

    SignedReceipt spend(const KeyPair& spender, std::vector<Outpoint> inputs, const KeyPair& payee, Amount amount,
                        Amount fee, const std::string& id)
    {
        return str.validate(spend_draft(spender, std::move(inputs), payee, amount, fee, id));
    }

    /// Alice ends up holding a single 100-coin output at {receipt, 0}.
    Outpoint fund_alice()
    {
        const auto m = str.mint_coinbase(notary, 1000);
        const auto r = spend(notary, {{m.receipt_id, 0}}, alice, 100, 0, "fund");
        return {r.receipt_id, 0};
    }
};

} // namespace

TEST_SUITE("payment")
{
    TEST_CASE("change returns to the spender")
    {
        CashWorld w;
        const auto in = w.fund_alice();
        const auto r = w.spend(w.alice, {in}, w.bob, 60, 2, "pay");
        REQUIRE(r.change);
        CHECK(*r.change == 38);
        const auto outs = receipt_outputs(r);
        REQUIRE(outs.size() == 2);
        CHECK(outs[0] == CashOutput{w.bob.key_id, 60});
        CHECK(outs[1] == CashOutput{w.alice.key_id, 38});
        const auto utxo = w.str.utxo_snapshot();
        CHECK(utxo.find(in)->spent_by == r.receipt_id);
        CHECK(utxo.find({r.receipt_id, 1})->owner == w.alice.key_id);
        CHECK_FALSE(r.accept_sig);
    }

    TEST_CASE("exact spend leaves no change")
    {
        CashWorld w;
        const auto in = w.fund_alice();
        const auto r = w.spend(w.alice, {in}, w.bob, 99, 1, "exact");
        CHECK_FALSE(r.change);
        CHECK(receipt_outputs(r).size() == 1);
    }

    TEST_CASE("cash rule violations")
    {
        CashWorld w;
        const auto in = w.fund_alice();
        CHECK(code_of([&] { w.spend(w.alice, {in}, w.bob, 100, 1, "over"); }) == Errc::insufficient_input);
        CHECK(code_of([&] { w.spend(w.alice, {}, w.bob, 1, 0, "none"); }) == Errc::insufficient_input);
        CHECK(code_of([&] { w.spend(w.bob, {in}, w.charlie, 1, 0, "thief"); }) == Errc::not_owner);
        CHECK(code_of([&] { w.spend(w.alice, {in, in}, w.bob, 1, 0, "twice"); }) == Errc::double_spend);
        CHECK(code_of([&] { w.spend(w.alice, {{Digest::of(std::string_view{"?"}), 0}}, w.bob, 1, 0, "ghost"); }) ==
              Errc::unknown_outpoint);
        CHECK(code_of([&] { w.spend(w.alice, {in}, w.bob, 1, -1, "neg"); }) == Errc::invariant_violation);
        w.spend(w.alice, {in}, w.bob, 50, 0, "first");
        CHECK(code_of([&] { w.spend(w.alice, {in}, w.charlie, 50, 0, "second"); }) == Errc::double_spend);
    }

    TEST_CASE("check_cash on its own")
    {
        CashWorld w;
        const auto in = w.fund_alice();
        const auto utxo = w.str.utxo_snapshot();
        const auto c = check_cash({{in}, {{w.bob.key_id, 60}}, 2}, w.alice.key_id, utxo);
        CHECK(c.input_total == 100);
        CHECK(c.change == 38);
        CHECK(code_of([&] { check_cash({{in}, {{w.bob.key_id, 100}}, 1}, w.alice.key_id, utxo); }) ==
              Errc::insufficient_input);
    }

    TEST_CASE("two drafts racing for one outpoint")
    {
        for (int round = 0; round < 10; ++round) {
            CashWorld w;
            const auto in = w.fund_alice();
            const auto d1 = w.spend_draft(w.alice, {in}, w.bob, 10, 0, "race.a");
            const auto d2 = w.spend_draft(w.alice, {in}, w.charlie, 10, 0, "race.b");
            std::atomic<int> ok{0}, double_spends{0};
            auto attempt = [&](const TransactionDraft& d) {
                try {
                    w.str.validate(d);
                    ++ok;
                } catch (const Error& e) {
                    if (e.code() == Errc::double_spend) ++double_spends;
                }
            };
            std::thread t1(attempt, std::cref(d1));
            std::thread t2(attempt, std::cref(d2));
            t1.join();
            t2.join();
            CHECK(ok == 1);
            CHECK(double_spends == 1);
            CHECK(verify_chain(w.str.log_snapshot(), w.str.chain_policy()).ok);
        }
    }

    TEST_CASE("cash drafts are not countersigned")
    {
        CashWorld w;
        const auto in = w.fund_alice();
        const auto d = w.spend_draft(w.alice, {in}, w.bob, 10, 0, "c");
        CHECK(code_of([&] { w.str.accept(d, w.bob); }) == Errc::wrong_state);
    }

    TEST_CASE("coinbase minting")
    {
        CashWorld w;
        CHECK(code_of([&] { w.str.mint_coinbase(w.alice, 5000); }) == Errc::not_validator);
        CHECK(code_of([&] { w.str.mint_coinbase(w.notary, 5000, 2); }) == Errc::insufficient_input);

        const auto in = w.fund_alice();
        w.spend(w.alice, {in}, w.bob, 60, 2, "fee");
        const auto m = w.str.mint_coinbase(w.notary, 5000, 2);
        REQUIRE(m.proposal.coinbase);
        CHECK(m.proposal.cash->inputs.empty());
        const auto utxo = w.str.utxo_snapshot();
        CHECK(utxo.find({m.receipt_id, 0})->amount == 5002);
        CHECK(utxo.find({m.receipt_id, 0})->owner == w.notary.key_id);
        CHECK(utxo.minted_total() == 6000);
        CHECK(utxo.fee_pool() == 0);
        CHECK(utxo.unspent_total() == utxo.minted_total() - utxo.fees_total() + utxo.recycled_total());
        CHECK(code_of([&] { w.str.mint_coinbase(w.notary, 0, 1); }) == Errc::insufficient_input);
        CHECK(m.entry().events[0].from_agent == coinbase_agent());
    }

    TEST_CASE("acknowledgment by spending")
    {
        CashWorld w;
        const auto m = w.str.mint_coinbase(w.notary, 1000);
        CHECK(w.str.ack_status(m.receipt_id) == AckStatus::pending);
        const auto to_bob = w.spend(w.notary, {{m.receipt_id, 0}}, w.bob, 300, 0, "to-bob");
        CHECK(w.str.ack_status(m.receipt_id) == AckStatus::acknowledged);
        CHECK(w.str.ack_status(to_bob.receipt_id) == AckStatus::pending);

        // The notary spending its own change does not acknowledge the payment to Bob.
        w.spend(w.notary, {{to_bob.receipt_id, 1}}, w.charlie, 100, 0, "change-spend");
        CHECK(w.str.ack_status(to_bob.receipt_id) == AckStatus::pending);

        const auto bob_spend = w.spend_draft(w.bob, {{to_bob.receipt_id, 0}}, w.alice, 10, 0, "bob-spends");
        CHECK(acknowledge_by_spend(bob_spend.proposal, w.bob.key_id, to_bob) == AckStatus::acknowledged);
        CHECK(code_of([&] { acknowledge_by_spend(bob_spend.proposal, w.charlie.key_id, to_bob); }) == Errc::not_payee);
        CHECK(code_of([&] { acknowledge_by_spend(bob_spend.proposal, w.bob.key_id, m); }) ==
              Errc::invariant_violation);
        w.str.validate(bob_spend);
        CHECK(w.str.ack_status(to_bob.receipt_id) == AckStatus::acknowledged);

        const auto rebuilt = rebuild_acknowledgments(w.str.log_snapshot().receipts());
        CHECK(rebuilt.acknowledged_count() == 2);
    }

    TEST_CASE("cheques need both signatures")
    {
        test::World w(Mode::digital_cheque);
        auto d = w.str.offer(make_payment(event("c1", "USD", 2500, w.alice, w.bob, w.clock->now())), w.alice);
        CHECK(code_of([&] { check_cheque(d); }) == Errc::missing_receiver_signature);
        CHECK(code_of([&] { w.str.validate(d); }) == Errc::missing_receiver_signature);
        CHECK(code_of([&] { w.str.accept(d, w.charlie); }) == Errc::not_a_party);
        d = w.str.accept(d, w.bob);
        check_cheque(d);
        const auto r = w.str.validate(d);
        CHECK(r.accept_sig->signer == w.bob.key_id);

        auto unissued = w.str.open_draft(make_payment(event("c2", "USD", 5, w.bob, w.alice, w.clock->now())));
        CHECK(code_of([&] { w.str.accept(unissued, w.alice); }) == Errc::wrong_state);
        CHECK(code_of([&] { w.str.offer(unissued, w.alice); }) == Errc::not_a_party);
    }

    TEST_CASE("mode shapes are enforced")
    {
        test::World cheque(Mode::digital_cheque);
        auto pair = make_exchange(event("g", "USD", 1, cheque.alice, cheque.bob, 0),
                                  event("t", "bicycle", 1, cheque.bob, cheque.alice, 0));
        CHECK(code_of([&] { cheque.str.offer(pair, cheque.alice); }) == Errc::invariant_violation);

        test::World joint;
        CHECK(code_of([&] { joint.str.offer(make_payment(event("p", "USD", 1, joint.alice, joint.bob, 0)), joint.alice); }) ==
              Errc::invariant_violation);

        CashWorld cash;
        CashTransaction tx{{}, {{cash.bob.key_id, 5}}, 0};
        auto wrong_resource = make_cash_entry(cash.alice.key_id, tx, "USD", "w", 0);
        CHECK(code_of([&] { cash.str.offer(wrong_resource, cash.alice, tx); }) == Errc::invariant_violation);
        CashTransaction two_payees{{}, {{cash.bob.key_id, 5}, {cash.charlie.key_id, 5}}, 0};
        CHECK(code_of([&] { make_cash_entry(cash.alice.key_id, two_payees, "COIN", "x", 0); }) ==
              Errc::invariant_violation);
    }
}
