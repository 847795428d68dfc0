#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>
#include <nlohmann/json.hpp>

#include "legendre/bounded_value.hpp"
#include "legendre/constants.hpp"
#include "legendre/fmap.hpp"

namespace legendre {

enum class LogFactorialMode { exact, stirling };

// exact: enclosure of log m! as sum_{j <= m} log j.
// stirling: enclosure of log(sqrt(2 pi) m^(m + 1/2) e^(-m)), an
// approximation of log m! (relative error about 1/(12 m)); m = 0 gives 0.
BoundedValue log_classic_factorial(std::uint64_t m, Precision prec = kDefaultPrecision,
                                   LogFactorialMode mode = LogFactorialMode::exact);

struct TableRow {
  std::uint64_t n = 0;
  BoundedValue lhs;       // log n!_f
  BoundedValue rhs;       // log (alpha n)! + beta_f n
  BoundedValue residual;  // lhs - rhs
};

// The two comparison tables: 1 is f = x - 1 with (1, 2), 2 is
// f = ceil((x - 1)/2) with (2, 4).
struct TableSpec {
  int which = 1;
  FMap f;
  LinearCertificate cert;
  std::string lhs_label;
  std::string rhs_label;
};

TableSpec table_spec(int which);

// beta_f for the tables: the accelerated value, checked against the rigorous
// enclosure at rigorous_tol.
struct BetaEstimate {
  BoundedValue value;
  ConstantResult accelerated;
  ConstantResult rigorous;
  bool consistent = false;
};

// Throws DomainError when the accelerated value falls outside the rigorous
// enclosure.
BetaEstimate table_beta(const FMap& f, const LinearCertificate& cert, double rigorous_tol = 1e-5,
                        const ConstantOptions& options = {});

std::vector<TableRow> table(const FMap& f, const LinearCertificate& cert, const BoundedValue& beta,
                            const std::vector<std::uint64_t>& rows, Precision prec = kDefaultPrecision,
                            unsigned threads = 1);

struct TrendPoint {
  std::uint64_t n = 0;
  BoundedValue ratio;  // |r(n)| / n
};

std::vector<TrendPoint> residual_trend(const FMap& f, const LinearCertificate& cert, const BoundedValue& beta,
                                       const std::vector<std::uint64_t>& ns, Precision prec = kDefaultPrecision);

// Terms prod_p p^(sum_k floor((n-1) / (ceil((p-1)/2) p^k))) for n = 1..count.
std::vector<mpz_class> a202367_sequence(std::size_t count);

// Output formats.
// Aligned columns as in the printed tables: values truncated to 4 decimals.
std::string format_table_text(const TableSpec& spec, const std::vector<TableRow>& rows);
// n,lhs_lo,lhs_hi,rhs_lo,rhs_hi,residual
std::string format_table_csv(const std::vector<TableRow>& rows);
nlohmann::json table_json(const std::vector<TableRow>& rows);

// "1..10,100,1000" -> {1,...,10,100,1000}. Throws ParseError.
std::vector<std::uint64_t> parse_rows(const std::string& text);

// Quotes a CSV field per RFC 4180 when it holds a comma, quote or newline.
std::string csv_field(const std::string& field);

// Value truncated toward zero to `decimals` places, with a thousands
// separator in the integer part.
std::string truncated_decimal(const Real& value, int decimals, bool group_thousands);

}  // namespace legendre
