#pragma once

#include <memory>
#include <string>

#include "tea/str.hpp"
#include "tea/views.hpp"

namespace tea::test {

inline constexpr Timestamp march_2019 = 1551398400;
inline constexpr Timestamp april_2019 = 1554076800;
inline constexpr Timestamp january_2020 = 1579046400;

inline EconomicEvent event(std::string id, std::string resource, Amount qty, const KeyPair& from, const KeyPair& to,
                           Timestamp t)
{
    return EconomicEvent{std::move(id), std::move(resource), qty, from.key_id, to.key_id, t, std::nullopt};
}

struct World {
    KeyPair alice = derive_keypair(1, "alice");
    KeyPair bob = derive_keypair(1, "bob");
    KeyPair charlie = derive_keypair(1, "charlie");
    KeyPair notary = derive_keypair(1, "validator:notary");
    std::shared_ptr<ManualClock> clock = std::make_shared<ManualClock>(march_2019);
    std::shared_ptr<NotaryValidator> validator = std::make_shared<NotaryValidator>(notary);
    SharedTransactionRepository str;

    explicit World(Mode mode = Mode::joint_suite, bool server_signs = true)
        : str(StrConfig{mode, server_signs}, {validator}, clock)
    {
    }

    TransactionDraft offered_exchange(const KeyPair& from, const KeyPair& to, const std::string& give_resource,
                                      Amount give_qty, const std::string& take_resource, Amount take_qty,
                                      const std::string& id)
    {
        auto entry = make_exchange(event(id + ".give", give_resource, give_qty, from, to, clock->now()),
                                   event(id + ".take", take_resource, take_qty, to, from, clock->now()));
        return str.offer(std::move(entry), from);
    }

    SignedReceipt exchange(const KeyPair& from, const KeyPair& to, const std::string& give_resource, Amount give_qty,
                           const std::string& take_resource, Amount take_qty, const std::string& id)
    {
        auto d = offered_exchange(from, to, give_resource, give_qty, take_resource, take_qty, id);
        return str.validate(str.accept(std::move(d), to));
    }

    SignedReceipt cheque(const KeyPair& from, const KeyPair& to, const std::string& resource, Amount qty,
                         const std::string& id)
    {
        auto d = str.offer(make_payment(event(id, resource, qty, from, to, clock->now())), from);
        return str.validate(str.accept(std::move(d), to));
    }

    /// Alice buys two bicycles from Bob (70 and 80 USD) and sells one to
    /// Charlie for 100 USD. Amounts in cents.
    void bicycle()
    {
        clock->set(march_2019);
        exchange(alice, bob, "USD", 7000, "bicycle", 1, "buy1");
        clock->set(april_2019);
        exchange(alice, bob, "USD", 8000, "bicycle", 1, "buy2");
        clock->set(january_2020);
        exchange(alice, charlie, "bicycle", 1, "USD", 10000, "sell1");
    }

    /// Bicycle plus two further exchanges.
    void five_receipts()
    {
        bicycle();
        clock->advance(3600);
        exchange(bob, charlie, "USD", 2500, "bond", 3, "bond1");
        clock->advance(3600);
        exchange(charlie, alice, "EUR", 400, "USD", 450, "fx1");
    }
};

inline ResourceCatalog bicycle_catalog()
{
    ResourceCatalog c;
    c.add({"USD", ResourceKind::currency, std::nullopt, "cent"});
    c.add({"EUR", ResourceKind::currency, std::nullopt, "cent"});
    c.add({"bicycle", ResourceKind::good, std::nullopt, "unit"});
    return c;
}

} // namespace tea::test
