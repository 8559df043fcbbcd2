#include "bcmec/ledger/chain.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "bcmec/errors.hpp"

namespace bcmec::ledger {

namespace {

constexpr char kHexDigits[] = "0123456789abcdef";

std::string format_double(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, end);
}

template <typename T>
T parse_number(const std::string& text, const char* what) {
  T value{};
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw ChainFormatError(std::string("chain: bad ") + what + " '" + text + "'");
  }
  return value;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string::size_type start = 0;
  while (true) {
    auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::string encode_tx(const Transaction& tx) {
  std::string out = std::to_string(tx.tx_id);
  out += tx.kind == TxKind::payment ? ",pay," : ",mint,";
  out += tx.from.empty() ? "-" : tx.from;
  out += ',';
  out += tx.to;
  out += ',';
  out += format_double(tx.amount);
  out += ',';
  out += std::to_string(tx.contract_id);
  return out;
}

Transaction decode_tx(const std::string& text) {
  auto f = split(text, ',');
  if (f.size() != 6) throw ChainFormatError("chain: transaction needs 6 fields");
  Transaction tx;
  tx.tx_id = parse_number<std::uint64_t>(f[0], "tx id");
  if (f[1] == "pay") {
    tx.kind = TxKind::payment;
  } else if (f[1] == "mint") {
    tx.kind = TxKind::mint;
  } else {
    throw ChainFormatError("chain: unknown tx kind '" + f[1] + "'");
  }
  tx.from = f[2] == "-" ? std::string() : f[2];
  tx.to = f[3];
  tx.amount = parse_number<double>(f[4], "amount");
  tx.contract_id = parse_number<std::int64_t>(f[5], "contract id");
  return tx;
}

std::string payload_prefix(const Block& block) {
  std::string out = std::to_string(block.height);
  out += '|';
  out += to_hex(block.prev_digest);
  out += '|';
  out += block.miner ? std::to_string(*block.miner) : std::string("-");
  return out;
}

std::string encode_txs(const Block& block) {
  std::string out;
  for (std::size_t i = 0; i < block.txs.size(); ++i) {
    if (i) out += ';';
    out += encode_tx(block.txs[i]);
  }
  return out;
}

}  // namespace

std::string to_hex(const Digest& digest) {
  std::string out;
  out.reserve(digest.size() * 2);
  for (auto byte : digest) {
    out += kHexDigits[byte >> 4];
    out += kHexDigits[byte & 0xf];
  }
  return out;
}

Digest digest_from_hex(const std::string& hex) {
  Digest digest{};
  if (hex.size() != digest.size() * 2) throw ChainFormatError("chain: digest must be 64 hex chars");
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    throw ChainFormatError("chain: digest has non-lowercase-hex character");
  };
  for (std::size_t i = 0; i < digest.size(); ++i) {
    digest[i] = static_cast<std::uint8_t>(nibble(hex[2 * i]) << 4 | nibble(hex[2 * i + 1]));
  }
  return digest;
}

Digest sha256(const std::string& bytes) {
  Digest digest{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1 ||
      len != digest.size()) {
    throw LedgerError("sha256: digest computation failed");
  }
  return digest;
}

std::string Block::canonical_payload() const {
  return payload_prefix(*this) + '|' + encode_txs(*this);
}

std::string encode_block_line(const Block& block) {
  return payload_prefix(block) + '|' + to_hex(block.digest) + '|' + encode_txs(block);
}

Block decode_block_line(const std::string& line) {
  auto f = split(line, '|');
  if (f.size() != 5) throw ChainFormatError("chain: block line needs 5 fields");
  Block block;
  block.height = parse_number<std::uint64_t>(f[0], "height");
  block.prev_digest = digest_from_hex(f[1]);
  if (f[2] != "-") block.miner = parse_number<std::size_t>(f[2], "miner");
  block.digest = digest_from_hex(f[3]);
  if (!f[4].empty()) {
    for (const auto& tx : split(f[4], ';')) block.txs.push_back(decode_tx(tx));
  }
  // Reject alternative spellings of the same values ("0.50" for "0.5", ...)
  // so every byte of a stored line is covered by verification.
  if (encode_block_line(block) != line) throw ChainFormatError("chain: non-canonical block line");
  return block;
}

Chain::Chain() {
  Block genesis;
  genesis.digest = genesis.compute_digest();
  blocks_.push_back(std::move(genesis));
}

const Block& Chain::append(std::vector<Transaction> txs, std::optional<std::size_t> miner) {
  Block block;
  block.height = blocks_.back().height + 1;
  block.prev_digest = blocks_.back().digest;
  block.txs = std::move(txs);
  block.miner = miner;
  block.digest = block.compute_digest();
  blocks_.push_back(std::move(block));
  return blocks_.back();
}

bool Chain::verify() const {
  if (blocks_.empty()) return false;
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    const Block& block = blocks_[k];
    if (block.height != k) return false;
    if (block.compute_digest() != block.digest) return false;
    if (k == 0) {
      if (block.prev_digest != Digest{}) return false;
    } else if (block.prev_digest != blocks_[k - 1].digest) {
      return false;
    }
  }
  return true;
}

void Chain::export_lines(std::ostream& out) const {
  for (const auto& block : blocks_) out << encode_block_line(block) << '\n';
}

Chain Chain::import_lines(std::istream& in) {
  std::vector<Block> blocks;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    blocks.push_back(decode_block_line(line));
  }
  if (blocks.empty()) throw ChainFormatError("chain: no blocks");
  return Chain(std::move(blocks));
}

}  // namespace bcmec::ledger
