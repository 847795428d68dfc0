#include "legendre/asymptotics.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <sstream>
#include <thread>

#include "legendre/errors.hpp"
#include "legendre/legendre_core.hpp"

namespace legendre {

BoundedValue log_classic_factorial(std::uint64_t m, Precision prec, LogFactorialMode mode) {
  if (m < 2) return BoundedValue::from_integer(0, prec);
  if (mode == LogFactorialMode::exact) {
    IntervalSum sum(prec);
    for (std::uint64_t j = 2; j <= m; ++j) sum.add(BoundedValue::log_of(j, prec));
    return sum.value();
  }
  // (m + 1/2) log m - m + log(2 pi) / 2
  BoundedValue two_pi(prec);
  mpfr_const_pi(two_pi.lo().get(), MPFR_RNDD);
  mpfr_const_pi(two_pi.hi().get(), MPFR_RNDU);
  two_pi.mul(mpz_class(2));
  BoundedValue log_two_pi(prec);
  mpfr_log(log_two_pi.lo().get(), two_pi.lo().get(), MPFR_RNDD);
  mpfr_log(log_two_pi.hi().get(), two_pi.hi().get(), MPFR_RNDU);
  log_two_pi.div(mpz_class(2));
  BoundedValue out = BoundedValue::log_of(m, prec);
  out.mul(mpq_class(static_cast<long>(2 * m + 1), 2));
  out -= BoundedValue::from_integer(mpz_class(static_cast<unsigned long>(m)), prec);
  out += log_two_pi;
  return out;
}

TableSpec table_spec(int which) {
  if (which == 1) {
    return {1, FMap::shifted_linear(1, -1), {1, mpq_class(2)}, "log (n+1)!_P", "log n! + Cn"};
  }
  if (which == 2) {
    return {2, FMap::half_ceiling(), {2, mpq_class(4)}, "log (n+1)!_S'", "log (2n)! + beta n"};
  }
  throw DomainError("table must be 1 or 2");
}

BetaEstimate table_beta(const FMap& f, const LinearCertificate& cert, double rigorous_tol,
                        const ConstantOptions& options) {
  BetaEstimate out;
  out.accelerated = accelerated_beta_f(f, cert, options);
  out.rigorous = beta_f(f, cert, rigorous_tol, options);
  out.value = out.accelerated.value;
  out.consistent = out.rigorous.value.contains(out.accelerated.value);
  if (!out.consistent) {
    throw DomainError("accelerated beta_f " + out.accelerated.value.to_string(12) +
                      " lies outside the rigorous enclosure " + out.rigorous.value.to_string(12));
  }
  return out;
}

namespace {

TableRow make_row(const FMap& f, const LinearCertificate& cert, const BoundedValue& beta, std::uint64_t n,
                  Precision prec) {
  TableRow row;
  row.n = n;
  row.lhs = log_factorial(f, n, prec);
  BoundedValue linear = beta;
  linear.mul(mpz_class(static_cast<unsigned long>(n)));
  row.rhs = log_classic_factorial(cert.alpha * n, prec) + linear;
  row.residual = row.lhs - row.rhs;
  return row;
}

}  // namespace

std::vector<TableRow> table(const FMap& f, const LinearCertificate& cert, const BoundedValue& beta,
                            const std::vector<std::uint64_t>& rows, Precision prec, unsigned threads) {
  std::vector<TableRow> out(rows.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) out[i] = make_row(f, cert, beta, rows[i], prec);
  };
  const unsigned pool_size = static_cast<unsigned>(std::min<std::size_t>(std::max(threads, 1u), rows.size()));
  if (pool_size <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < pool_size; ++t) pool.emplace_back(work);
  }
  return out;
}

std::vector<TrendPoint> residual_trend(const FMap& f, const LinearCertificate& cert, const BoundedValue& beta,
                                       const std::vector<std::uint64_t>& ns, Precision prec) {
  std::vector<TrendPoint> out;
  for (const TableRow& row : table(f, cert, beta, ns, prec)) {
    if (row.n == 0) throw DomainError("residual trend needs n >= 1");
    BoundedValue ratio = row.residual.abs();
    ratio.div(mpz_class(static_cast<unsigned long>(row.n)));
    out.push_back({row.n, std::move(ratio)});
  }
  return out;
}

std::vector<mpz_class> a202367_sequence(std::size_t count) {
  if (count == 0) throw DomainError("sequence length must be at least 1");
  const FMap f = FMap::half_ceiling();
  std::vector<mpz_class> out;
  out.reserve(count);
  for (std::size_t n = 1; n <= count; ++n) out.push_back(factorial(f, n - 1).value);
  return out;
}

std::string truncated_decimal(const Real& value, int decimals, bool group_thousands) {
  std::string text = value.fixed(decimals, MPFR_RNDZ);
  if (!group_thousands) return text;
  const std::size_t sign = (!text.empty() && text.front() == '-') ? 1 : 0;
  std::size_t point = text.find('.');
  if (point == std::string::npos) point = text.size();
  for (std::size_t i = point; i > sign + 3; i -= 3) text.insert(i - 3, ",");
  return text;
}

namespace {

std::string with_commas(std::uint64_t n) {
  std::string digits = std::to_string(n);
  for (std::size_t i = digits.size(); i > 3; i -= 3) digits.insert(i - 3, ",");
  return digits;
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

}  // namespace

std::string format_table_text(const TableSpec& spec, const std::vector<TableRow>& rows) {
  std::vector<std::array<std::string, 3>> cells;
  cells.push_back({"n", spec.lhs_label, spec.rhs_label});
  for (const TableRow& row : rows) {
    cells.push_back({with_commas(row.n), truncated_decimal(row.lhs.lo(), 4, true) + "...",
                     truncated_decimal(row.rhs.lo(), 4, true) + "..."});
  }
  std::array<std::size_t, 3> width{};
  for (const auto& line : cells) {
    for (std::size_t c = 0; c < 3; ++c) width[c] = std::max(width[c], line[c].size());
  }
  std::ostringstream os;
  const std::string rule = std::string(width[0] + width[1] + width[2] + 10, '-');
  os << rule << '\n';
  for (std::size_t i = 0; i < cells.size(); ++i) {
    os << "| " << pad(cells[i][0], width[0]) << " || " << pad(cells[i][1], width[1]) << " | "
       << pad(cells[i][2], width[2]) << " |\n";
    if (i == 0) os << rule << '\n';
  }
  os << rule << '\n';
  return os.str();
}

std::string csv_field(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string format_table_csv(const std::vector<TableRow>& rows) {
  std::ostringstream os;
  os << "n,lhs_lo,lhs_hi,rhs_lo,rhs_hi,residual\r\n";
  for (const TableRow& row : rows) {
    Real mid(row.residual.precision());
    mpfr_add(mid.get(), row.residual.lo().get(), row.residual.hi().get(), MPFR_RNDN);
    mpfr_div_2ui(mid.get(), mid.get(), 1, MPFR_RNDN);
    os << row.n << ',' << csv_field(row.lhs.lo().fixed(12, MPFR_RNDD)) << ','
       << csv_field(row.lhs.hi().fixed(12, MPFR_RNDU)) << ',' << csv_field(row.rhs.lo().fixed(12, MPFR_RNDD)) << ','
       << csv_field(row.rhs.hi().fixed(12, MPFR_RNDU)) << ',' << csv_field(mid.fixed(12)) << "\r\n";
  }
  return os.str();
}

nlohmann::json table_json(const std::vector<TableRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const TableRow& row : rows) {
    out.push_back({{"n", row.n},
                   {"lhs", {{"lo", row.lhs.lo().fixed(12, MPFR_RNDD)}, {"hi", row.lhs.hi().fixed(12, MPFR_RNDU)}}},
                   {"rhs", {{"lo", row.rhs.lo().fixed(12, MPFR_RNDD)}, {"hi", row.rhs.hi().fixed(12, MPFR_RNDU)}}},
                   {"residual",
                    {{"lo", row.residual.lo().fixed(12, MPFR_RNDD)}, {"hi", row.residual.hi().fixed(12, MPFR_RNDU)}}}});
  }
  return out;
}

namespace {

std::uint64_t parse_count(std::string_view token) {
  std::string cleaned;
  for (char c : token) {
    if (c != ' ' && c != '_') cleaned.push_back(c);
  }
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(cleaned.data(), cleaned.data() + cleaned.size(), value);
  if (cleaned.empty() || ec != std::errc() || ptr != cleaned.data() + cleaned.size()) {
    throw ParseError("not a row number: '" + std::string(token) + "'");
  }
  return value;
}

}  // namespace

std::vector<std::uint64_t> parse_rows(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::string_view rest(text);
  if (rest.empty()) throw ParseError("empty row list");
  while (true) {
    const auto comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    const auto dots = item.find("..");
    if (dots == std::string_view::npos) {
      out.push_back(parse_count(item));
    } else {
      const std::uint64_t first = parse_count(item.substr(0, dots));
      const std::uint64_t last = parse_count(item.substr(dots + 2));
      if (first > last) throw ParseError("descending row range: '" + std::string(item) + "'");
      if (last - first > 1000000) throw ParseError("row range too long");
      for (std::uint64_t n = first; n <= last; ++n) out.push_back(n);
    }
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace legendre
