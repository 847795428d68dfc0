#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "legendre/asymptotics.hpp"
#include "legendre/bounded_value.hpp"

namespace reference {

struct Row {
  std::uint64_t n;
  const char* lhs;  // truncated to 4 decimals
  const char* rhs;  // as displayed
};

// Published comparison tables, thousands separators removed.
inline const std::vector<Row> kTable1 = {
    {1, "0.6931", "1.2269"},          {2, "3.1780", "3.1470"},         {3, "3.8712", "5.4726"},
    {4, "8.6586", "8.0859"},          {5, "9.3518", "10.9223"},        {6, "14.8812", "13.9410"},
    {7, "15.5744", "17.1139"},        {8, "21.0550", "20.4203"},       {9, "21.7482", "23.8445"},
    {10, "26.6310", "27.3741"},       {100, "471.9704", "480.6040"},   {1000, "7119.5084", "7130.9600"},
    {5000, "43759.7980", "43726.0000"}, {10000, "94417.8375", "94378.6000"}};

inline const std::vector<Row> kTable2 = {
    {1, "1.7917", "1.7607"},            {2, "5.8861", "5.3133"},           {3, "10.7223", "9.7821"},
    {4, "15.5098", "14.8751"},          {5, "19.6995", "20.4426"},         {6, "29.4033", "26.3931"},
    {7, "31.1951", "32.6647"},          {8, "39.5089", "39.2130"},         {9, "48.3882", "46.0042"},
    {10, "56.4899", "53.0120"},         {100, "982.0880", "969.9960"},     {1000, "14288.7934", "14274.2000"},
    {5000, "87486.3657", "87447.1000"}, {10000, "188805.0729", "188752.0000"}};

inline mpq_class decimal(const std::string& text) {
  const auto dot = text.find('.');
  std::string digits = text;
  std::size_t places = 0;
  if (dot != std::string::npos) {
    digits.erase(dot, 1);
    places = text.size() - dot - 1;
  }
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, places);
  return mpq_class(mpz_class(digits), scale);
}

// Truncation of both enclosure ends to 4 decimals equals the displayed value.
inline bool lhs_matches(const legendre::BoundedValue& v, const std::string& shown) {
  return legendre::truncated_decimal(v.lo(), 4, false) == shown && legendre::truncated_decimal(v.hi(), 4, false) == shown;
}

// Trailing zeros mark the precision the value was displayed at: with k
// significant decimals and u = 10^-k, the value must lie in [D - u/2, D + u),
// which admits both rounding and truncation of the true value.
inline bool rhs_matches(const legendre::BoundedValue& v, const std::string& shown) {
  std::string trimmed = shown;
  while (trimmed.back() == '0') trimmed.pop_back();
  if (trimmed.back() == '.') trimmed.pop_back();
  const auto dot = trimmed.find('.');
  const std::size_t places = dot == std::string::npos ? 0 : trimmed.size() - dot - 1;
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, places);
  const mpq_class d = decimal(shown), u(1, scale);
  return legendre::BoundedValue::from_bounds(d - u / 2, d + u).contains(v) && !v.contains(d + u);
}

}  // namespace reference
