#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace bcmec::ledger {

using Digest = std::array<std::uint8_t, 32>;

std::string to_hex(const Digest& digest);
Digest digest_from_hex(const std::string& hex);
Digest sha256(const std::string& bytes);

enum class TxKind { payment, mint };

struct Transaction {
  std::uint64_t tx_id = 0;
  TxKind kind = TxKind::payment;
  std::string from;  // empty for mint
  std::string to;
  double amount = 0.0;
  std::int64_t contract_id = -1;  // -1 when not tied to a trading contract

  friend bool operator==(const Transaction&, const Transaction&) = default;
};

struct Block {
  std::uint64_t height = 0;
  Digest prev_digest{};
  std::vector<Transaction> txs;
  std::optional<std::size_t> miner;  // empty: genesis or external miner
  Digest digest{};

  // Canonical bytes covered by the digest (every field except `digest`).
  std::string canonical_payload() const;
  Digest compute_digest() const { return sha256(canonical_payload()); }

  friend bool operator==(const Block&, const Block&) = default;
};

// Append-only hash chain. Constructed with a genesis block at height 0.
class Chain {
 public:
  Chain();

  const Block& append(std::vector<Transaction> txs, std::optional<std::size_t> miner);

  const Block& head() const { return blocks_.back(); }
  const std::vector<Block>& blocks() const { return blocks_; }
  std::size_t size() const { return blocks_.size(); }

  // Test hook: mutable access for tamper experiments.
  std::vector<Block>& mutable_blocks() { return blocks_; }

  // Recomputes every digest and checks linkage and heights.
  bool verify() const;

  // One block per line: height|prev|miner|digest|tx;tx;...
  // with tx = id,kind,from,to,amount,contract.
  void export_lines(std::ostream& out) const;

  // Parses an exported chain. Throws ChainFormatError on malformed or
  // non-canonical lines. The result is not verified; call verify().
  static Chain import_lines(std::istream& in);

 private:
  explicit Chain(std::vector<Block> blocks) : blocks_(std::move(blocks)) {}

  std::vector<Block> blocks_;
};

std::string encode_block_line(const Block& block);
Block decode_block_line(const std::string& line);

}  // namespace bcmec::ledger
