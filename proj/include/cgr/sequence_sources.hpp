#ifndef CGR_SEQUENCE_SOURCES_HPP
#define CGR_SEQUENCE_SOURCES_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cgr/error.hpp"
#include "cgr/splitmix64.hpp"

namespace cgr {

using BigInt = boost::multiprecision::cpp_int;

/// A stream of symbol indices over a finite alphabet. Every index is
/// strictly below alphabet_size; producers enforce this on construction.
struct SymbolSequence {
  std::uint32_t alphabet_size = 0;
  std::vector<std::uint32_t> symbols;
  std::string provenance;

  void validate() const {
    if (alphabet_size < 1) throw ContractError("symbol sequence: empty alphabet");
    for (std::uint32_t s : symbols)
      if (s >= alphabet_size)
        throw ContractError("symbol sequence: index " + std::to_string(s) +
                            " outside alphabet of size " +
                            std::to_string(alphabet_size));
  }
};

/// Maps input characters to symbol indices and names the polygon vertices.
/// Lookup is case-insensitive.
struct AlphabetMap {
  std::string name;
  std::map<char, std::uint32_t> mapping;        // upper-case keys
  std::vector<std::string> vertex_labels;       // one per index

  std::uint32_t alphabet_size() const {
    return static_cast<std::uint32_t>(vertex_labels.size());
  }

  bool lookup(char ch, std::uint32_t& out) const {
    auto it = mapping.find(static_cast<char>(std::toupper(static_cast<unsigned char>(ch))));
    if (it == mapping.end()) return false;
    out = it->second;
    return true;
  }
};

/// DNA corners: A bottom-left, C top-left, G top-right, T bottom-right.
/// U is read as T so RNA input works unchanged.
inline AlphabetMap dna_alphabet() {
  AlphabetMap m;
  m.name = "dna";
  m.mapping = {{'A', 0}, {'C', 1}, {'G', 2}, {'T', 3}, {'U', 3}};
  m.vertex_labels = {"A", "C", "G", "T"};
  return m;
}

/// The 20 amino-acid one-letter codes in their conventional table order.
inline AlphabetMap protein_alphabet() {
  AlphabetMap m;
  m.name = "protein";
  const char* codes = "ARNDCQEGHILKMFPSTWYV";
  for (std::uint32_t i = 0; i < 20; ++i) {
    m.mapping[codes[i]] = i;
    m.vertex_labels.emplace_back(1, codes[i]);
  }
  return m;
}

struct FastaRecord {
  std::string header;          // text after '>', without the newline
  SymbolSequence sequence;
  std::size_t skipped = 0;     // admissibility failures (N, gaps, ...)
};

/// Case-insensitive FASTA reader. Characters outside the alphabet are
/// skipped and counted per record; a record with no admissible symbols
/// at all is an error, as is an input with no records.
inline std::vector<FastaRecord> parse_fasta(std::istream& is,
                                            const AlphabetMap& alphabet) {
  std::vector<FastaRecord> records;
  std::string line;
  bool have_record = false;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '>') {
      if (have_record && records.back().sequence.symbols.empty())
        throw ParseError("FASTA record '" + records.back().header +
                         "': zero admissible symbols");
      FastaRecord rec;
      rec.header = line.substr(1);
      rec.sequence.alphabet_size = alphabet.alphabet_size();
      rec.sequence.provenance = "fasta:" + rec.header;
      records.push_back(std::move(rec));
      have_record = true;
      continue;
    }
    if (!have_record)
      throw ParseError("FASTA: sequence data before first '>' header");
    FastaRecord& rec = records.back();
    for (char ch : line) {
      if (std::isspace(static_cast<unsigned char>(ch))) continue;
      std::uint32_t idx;
      if (alphabet.lookup(ch, idx))
        rec.sequence.symbols.push_back(idx);
      else
        ++rec.skipped;
    }
  }
  if (!have_record) throw ParseError("FASTA: no records found");
  if (records.back().sequence.symbols.empty())
    throw ParseError("FASTA record '" + records.back().header +
                     "': zero admissible symbols");
  for (const FastaRecord& rec : records) rec.sequence.validate();
  return records;
}

inline std::vector<FastaRecord> parse_fasta_file(const std::string& path,
                                                 const AlphabetMap& alphabet) {
  std::ifstream is(path);
  if (!is) throw ParseError("cannot open FASTA file " + path);
  return parse_fasta(is, alphabet);
}

/// OEIS b-file: lines of "index value". Indices must increase by exactly
/// one; '#' lines and blank lines are ignored.
inline std::vector<BigInt> parse_oeis_bfile(std::istream& is) {
  std::vector<BigInt> values;
  std::string line;
  std::size_t lineno = 0;
  bool have_prev = false;
  BigInt prev_index = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::size_t pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '#') continue;
    std::istringstream fields(line);
    BigInt index, value;
    if (!(fields >> index >> value))
      throw ParseError("b-file line " + std::to_string(lineno) +
                       ": expected 'index value'");
    if (have_prev && index != prev_index + 1)
      throw ParseError("b-file line " + std::to_string(lineno) +
                       ": index " + index.str() + " does not follow " +
                       prev_index.str());
    prev_index = index;
    have_prev = true;
    values.push_back(value);
  }
  if (values.empty()) throw ParseError("b-file contains no terms");
  return values;
}

inline std::vector<BigInt> parse_oeis_bfile_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ParseError("cannot open b-file " + path);
  return parse_oeis_bfile(is);
}

namespace detail {

inline std::uint32_t euclidean_mod(const BigInt& v, std::uint64_t m) {
  BigInt r = v % m;
  if (r < 0) r += m;
  return static_cast<std::uint32_t>(r);
}

}  // namespace detail

/// Reduces each value modulo m into a SymbolSequence over [0, m).
/// Negative values use the Euclidean convention (result in [0, m)).
inline SymbolSequence digits_mod(const std::vector<BigInt>& values,
                                 std::uint64_t m) {
  if (m < 2) throw ContractError("digits_mod: modulus must be at least 2");
  SymbolSequence seq;
  seq.alphabet_size = static_cast<std::uint32_t>(m);
  seq.provenance = "mod " + std::to_string(m);
  seq.symbols.reserve(values.size());
  for (const BigInt& v : values) seq.symbols.push_back(detail::euclidean_mod(v, m));
  seq.validate();
  return seq;
}

inline SymbolSequence digits_mod(const std::vector<std::uint64_t>& values,
                                 std::uint64_t m) {
  if (m < 2) throw ContractError("digits_mod: modulus must be at least 2");
  SymbolSequence seq;
  seq.alphabet_size = static_cast<std::uint32_t>(m);
  seq.provenance = "mod " + std::to_string(m);
  seq.symbols.reserve(values.size());
  for (std::uint64_t v : values)
    seq.symbols.push_back(static_cast<std::uint32_t>(v % m));
  seq.validate();
  return seq;
}

/// First n Fibonacci numbers reduced mod m, computed entirely in modular
/// arithmetic so no n overflows. F1 = F2 = 1.
inline SymbolSequence fibonacci_mod(std::size_t n, std::uint64_t m) {
  if (n < 1) throw ContractError("fibonacci_mod: need at least one term");
  if (m < 2) throw ContractError("fibonacci_mod: modulus must be at least 2");
  SymbolSequence seq;
  seq.alphabet_size = static_cast<std::uint32_t>(m);
  seq.provenance = "fib(" + std::to_string(n) + ") mod " + std::to_string(m);
  seq.symbols.reserve(n);
  std::uint64_t a = 1 % m, b = 1 % m;
  for (std::size_t i = 0; i < n; ++i) {
    seq.symbols.push_back(static_cast<std::uint32_t>(a));
    std::uint64_t next = (a + b) % m;
    a = b;
    b = next;
  }
  seq.validate();
  return seq;
}

/// All primes ≤ limit in order, after skipping the first `offset` of them.
/// Sieve of Eratosthenes; limit is capped at 10^8.
inline std::vector<std::uint64_t> primes(std::uint64_t limit,
                                         std::size_t offset = 0) {
  if (limit < 2) throw ContractError("primes: limit must be at least 2");
  if (limit > 100000000ULL)
    throw ContractError("primes: limit above 10^8 is not supported");
  std::vector<bool> composite(limit + 1, false);
  std::vector<std::uint64_t> out;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    if (offset > 0)
      --offset;
    else
      out.push_back(i);
    if (i * i <= limit)
      for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return out;
}

/// Reduced fraction with positive denominator.
struct Rational {
  BigInt num;
  BigInt den;

  Rational(BigInt n, BigInt d) : num(std::move(n)), den(std::move(d)) {
    if (den == 0) throw ContractError("rational: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    BigInt g = boost::multiprecision::gcd(num < 0 ? BigInt(-num) : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }
};

namespace detail {

inline BigInt floor_div(const BigInt& num, const BigInt& den) {
  BigInt q = num / den;  // truncates toward zero; den > 0 here
  if (num % den != 0 && num < 0) --q;
  return q;
}

}  // namespace detail

/// Euclidean continued-fraction expansion [a0; a1, ...] of a rational.
/// Canonical form ends with a quotient ≥ 2 (when longer than one term);
/// unit_tail splits that final quotient a into (a-1, 1) for print parity
/// with sources that use the non-canonical tail.
inline std::vector<BigInt> cf_partial_quotients_rational(
    const Rational& x, std::size_t max_terms = SIZE_MAX,
    bool unit_tail = false) {
  std::vector<BigInt> terms;
  BigInt num = x.num, den = x.den;
  while (den != 0 && terms.size() < max_terms) {
    BigInt a = detail::floor_div(num, den);
    terms.push_back(a);
    BigInt r = num - a * den;
    num = den;
    den = r;
  }
  if (unit_tail && den == 0 && !terms.empty() && terms.back() >= 2 &&
      terms.size() < max_terms) {
    terms.back() -= 1;
    terms.push_back(1);
  }
  return terms;
}

/// Continued fraction of a value given as a decimal digit string, emitting
/// only terms certified by interval arithmetic: the string represents
/// value ± half a unit in its last place, and a term is produced only when
/// both interval endpoints agree on it.
inline std::vector<BigInt> cf_partial_quotients_decimal(
    const std::string& digits, std::size_t max_terms = SIZE_MAX) {
  std::string mantissa;
  std::size_t frac_digits = 0;
  bool seen_point = false, negative = false;
  std::size_t i = 0;
  if (i < digits.size() && (digits[i] == '+' || digits[i] == '-')) {
    negative = digits[i] == '-';
    ++i;
  }
  for (; i < digits.size(); ++i) {
    char ch = digits[i];
    if (ch == '.') {
      if (seen_point) throw ParseError("decimal string: repeated '.'");
      seen_point = true;
    } else if (ch >= '0' && ch <= '9') {
      mantissa.push_back(ch);
      if (seen_point) ++frac_digits;
    } else if (!std::isspace(static_cast<unsigned char>(ch))) {
      throw ParseError(std::string("decimal string: unexpected character '") +
                       ch + "'");
    }
  }
  if (mantissa.empty()) throw ParseError("decimal string: no digits");

  BigInt m(mantissa);
  if (negative) m = -m;
  BigInt scale = 1;
  for (std::size_t k = 0; k < frac_digits; ++k) scale *= 10;

  // value = m / scale, uncertainty half an ulp: [ (2m-1)/(2·scale), (2m+1)/(2·scale) ]
  BigInt lo_num = 2 * m - 1, hi_num = 2 * m + 1;
  BigInt lo_den = 2 * scale, hi_den = 2 * scale;

  std::vector<BigInt> terms;
  while (terms.size() < max_terms) {
    BigInt a_lo = detail::floor_div(lo_num, lo_den);
    BigInt a_hi = detail::floor_div(hi_num, hi_den);
    if (a_lo != a_hi) break;
    terms.push_back(a_lo);
    // Fractional parts; reciprocal swaps the endpoints.
    BigInt lo_rem = lo_num - a_lo * lo_den;
    BigInt hi_rem = hi_num - a_lo * hi_den;
    if (lo_rem == 0 || hi_rem == 0) break;
    BigInt new_lo_num = hi_den, new_lo_den = hi_rem;
    BigInt new_hi_num = lo_den, new_hi_den = lo_rem;
    lo_num = std::move(new_lo_num);
    lo_den = std::move(new_lo_den);
    hi_num = std::move(new_hi_num);
    hi_den = std::move(new_hi_den);
    BigInt g = boost::multiprecision::gcd(lo_num < 0 ? BigInt(-lo_num) : lo_num, lo_den);
    if (g > 1) { lo_num /= g; lo_den /= g; }
    g = boost::multiprecision::gcd(hi_num < 0 ? BigInt(-hi_num) : hi_num, hi_den);
    if (g > 1) { hi_num /= g; hi_den /= g; }
  }
  if (terms.empty())
    throw ContractError(
        "decimal string: not enough precision to certify even the first term");
  return terms;
}

/// Partial quotients of sqrt(2): [1; 2, 2, 2, ...].
inline std::vector<BigInt> cf_sqrt2(std::size_t count) {
  if (count < 1) throw ContractError("cf_sqrt2: need at least one term");
  std::vector<BigInt> terms(count, BigInt(2));
  terms.front() = 1;
  return terms;
}

/// n symbols uniform over [0, m) from a seeded SplitMix64 stream.
inline SymbolSequence prng_stream(std::uint64_t seed, std::size_t n,
                                  std::uint64_t m) {
  if (m < 2) throw ContractError("prng_stream: alphabet must be at least 2");
  SymbolSequence seq;
  seq.alphabet_size = static_cast<std::uint32_t>(m);
  seq.provenance = "prng:" + std::to_string(seed);
  seq.symbols.reserve(n);
  SplitMix64 rng(seed);
  for (std::size_t i = 0; i < n; ++i)
    seq.symbols.push_back(static_cast<std::uint32_t>(rng.next_below(m)));
  seq.validate();
  return seq;
}

/// Reads a bundled digit file: '#' comment lines, then a decimal string
/// that may be wrapped across lines ("3.14159...").
inline std::string read_digit_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ParseError("cannot open digit file " + path);
  std::string out, line;
  while (std::getline(is, line)) {
    std::size_t pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '#') continue;
    for (char ch : line) {
      if (std::isspace(static_cast<unsigned char>(ch))) continue;
      if ((ch >= '0' && ch <= '9') || ch == '.')
        out.push_back(ch);
      else
        throw ParseError("digit file " + path + ": unexpected character '" +
                         std::string(1, ch) + "'");
    }
  }
  if (out.empty()) throw ParseError("digit file " + path + ": no digits");
  return out;
}

/// Individual digit values of a decimal string, ignoring the point.
/// "3.14" -> [3, 1, 4].
inline std::vector<std::uint64_t> digit_values(const std::string& decimal) {
  std::vector<std::uint64_t> out;
  for (char ch : decimal) {
    if (ch == '.') continue;
    if (ch < '0' || ch > '9')
      throw ParseError(std::string("digit stream: unexpected character '") +
                       ch + "'");
    out.push_back(static_cast<std::uint64_t>(ch - '0'));
  }
  return out;
}

}  // namespace cgr

#endif  // CGR_SEQUENCE_SOURCES_HPP
