#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bcmec/ledger/chain.hpp"
#include "bcmec/ledger/gas.hpp"
#include "bcmec/rng.hpp"

namespace bcmec::ledger {

// Identity tuple plus wallet balance. Keys are opaque stubs; nothing here
// signs anything.
struct Account {
  std::string user_id;
  std::string pubkey_stub;
  std::string privkey_stub;
  std::string wallet_address;
  double balance_tokens = 0.0;
};

// A trading contract created for one offloading request.
struct TradeContract {
  std::int64_t contract_id = 0;
  std::string payer_wallet;
  std::string payer_user_id;
  std::string payer_pubkey;
  double demand_gcycles = 0.0;
  double price_unit = 0.0;

  double cost() const { return price_unit * demand_gcycles; }
};

// Blockchain-as-a-service state for one simulation: accounts, trading
// contracts, the pending transaction pool, gas metering and the chain.
// Single writer.
class Ledger {
 public:
  explicit Ledger(std::uint64_t seed, GasSchedule gas = {});

  const Account& register_account(double initial_balance);

  // Records a trading contract for `wallet`. Meters creation_trade_gas.
  std::int64_t creation_trade(const std::string& wallet, double demand_gcycles, double price_unit);

  // Moves contract.cost() from the payer to `esp_wallet` and queues the
  // payment. Meters trading_gas. Throws InsufficientBalance without touching
  // any state when the payer cannot cover the cost.
  const Transaction& trading(std::int64_t contract_id, const std::string& esp_wallet);

  // Credits a freshly minted block reward. Minted tokens are tracked apart
  // from transfers.
  const Transaction& mint(const std::string& wallet, double amount);

  // Seals the pending pool into a new block.
  const Block& seal_block(std::optional<std::size_t> miner);

  const Account& account(const std::string& wallet) const;
  bool has_account(const std::string& wallet) const { return accounts_.contains(wallet); }
  const TradeContract& contract(std::int64_t contract_id) const;

  double total_balance() const;
  double minted_total() const { return minted_total_; }
  std::int64_t gas_used() const { return gas_used_; }
  const GasSchedule& gas_schedule() const { return gas_; }
  const std::vector<Transaction>& pending() const { return pending_; }
  const Chain& chain() const { return chain_; }
  Chain& mutable_chain() { return chain_; }

 private:
  std::string fresh_token(const char* tag);

  GasSchedule gas_;
  Rng rng_;
  std::map<std::string, Account> accounts_;
  std::vector<TradeContract> contracts_;
  std::vector<Transaction> pending_;
  Chain chain_;
  std::uint64_t next_tx_id_ = 0;
  std::uint64_t next_account_ = 0;
  std::int64_t gas_used_ = 0;
  double minted_total_ = 0.0;
};

}  // namespace bcmec::ledger
