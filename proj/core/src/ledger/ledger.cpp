#include "bcmec/ledger/ledger.hpp"

#include <string>

#include "bcmec/errors.hpp"

namespace bcmec::ledger {

Ledger::Ledger(std::uint64_t seed, GasSchedule gas) : gas_(gas), rng_(seed) { gas_.validate(); }

std::string Ledger::fresh_token(const char* tag) {
  std::string material = tag;
  material += ':';
  material += std::to_string(next_account_);
  material += ':';
  material += std::to_string(rng_.next());
  return to_hex(sha256(material)).substr(0, 40);
}

const Account& Ledger::register_account(double initial_balance) {
  if (!(initial_balance >= 0.0)) throw LedgerError("register_account: negative initial balance");
  Account account;
  account.user_id = fresh_token("id");
  account.pubkey_stub = fresh_token("pk");
  account.privkey_stub = fresh_token("sk");
  do {
    account.wallet_address = "0x" + fresh_token("wallet");
  } while (accounts_.contains(account.wallet_address));
  account.balance_tokens = initial_balance;
  ++next_account_;
  auto [it, inserted] = accounts_.emplace(account.wallet_address, std::move(account));
  return it->second;
}

std::int64_t Ledger::creation_trade(const std::string& wallet, double demand_gcycles, double price_unit) {
  auto it = accounts_.find(wallet);
  if (it == accounts_.end()) throw UnknownAccount("creation_trade: unknown wallet " + wallet);
  if (!(demand_gcycles > 0.0) || !(price_unit > 0.0)) {
    throw DomainError("creation_trade: demand and price must be positive");
  }
  TradeContract contract;
  contract.contract_id = static_cast<std::int64_t>(contracts_.size());
  contract.payer_wallet = wallet;
  contract.payer_user_id = it->second.user_id;
  contract.payer_pubkey = it->second.pubkey_stub;
  contract.demand_gcycles = demand_gcycles;
  contract.price_unit = price_unit;
  contracts_.push_back(std::move(contract));
  gas_used_ += gas_.creation_trade_gas;
  return contracts_.back().contract_id;
}

const Transaction& Ledger::trading(std::int64_t contract_id, const std::string& esp_wallet) {
  const TradeContract& c = contract(contract_id);
  auto payer = accounts_.find(c.payer_wallet);
  auto payee = accounts_.find(esp_wallet);
  if (payee == accounts_.end()) throw UnknownAccount("trading: unknown ESP wallet " + esp_wallet);
  const double cost = c.cost();
  if (payer->second.balance_tokens < cost) {
    throw InsufficientBalance("trading: wallet " + c.payer_wallet + " holds " +
                              std::to_string(payer->second.balance_tokens) + " < cost " +
                              std::to_string(cost));
  }
  payer->second.balance_tokens -= cost;
  payee->second.balance_tokens += cost;
  gas_used_ += gas_.trading_gas;
  Transaction tx;
  tx.tx_id = next_tx_id_++;
  tx.kind = TxKind::payment;
  tx.from = c.payer_wallet;
  tx.to = esp_wallet;
  tx.amount = cost;
  tx.contract_id = contract_id;
  pending_.push_back(std::move(tx));
  return pending_.back();
}

const Transaction& Ledger::mint(const std::string& wallet, double amount) {
  auto it = accounts_.find(wallet);
  if (it == accounts_.end()) throw UnknownAccount("mint: unknown wallet " + wallet);
  if (!(amount >= 0.0)) throw LedgerError("mint: negative amount");
  it->second.balance_tokens += amount;
  minted_total_ += amount;
  Transaction tx;
  tx.tx_id = next_tx_id_++;
  tx.kind = TxKind::mint;
  tx.to = wallet;
  tx.amount = amount;
  pending_.push_back(std::move(tx));
  return pending_.back();
}

const Block& Ledger::seal_block(std::optional<std::size_t> miner) {
  std::vector<Transaction> txs;
  txs.swap(pending_);
  return chain_.append(std::move(txs), miner);
}

const Account& Ledger::account(const std::string& wallet) const {
  auto it = accounts_.find(wallet);
  if (it == accounts_.end()) throw UnknownAccount("account: unknown wallet " + wallet);
  return it->second;
}

const TradeContract& Ledger::contract(std::int64_t contract_id) const {
  if (contract_id < 0 || static_cast<std::size_t>(contract_id) >= contracts_.size()) {
    throw LedgerError("unknown contract " + std::to_string(contract_id));
  }
  return contracts_[static_cast<std::size_t>(contract_id)];
}

double Ledger::total_balance() const {
  double total = 0.0;
  for (const auto& [wallet, account] : accounts_) total += account.balance_tokens;
  return total;
}

}  // namespace bcmec::ledger
