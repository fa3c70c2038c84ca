#pragma once

#include "heatgen/rational.hpp"

#include <string>
#include <vector>

inline heatgen::Rational Q(const char *text) { return heatgen::parse_rational(text); }

inline std::vector<heatgen::Rational> Qs(std::initializer_list<const char *> texts) {
  std::vector<heatgen::Rational> out;
  for (const char *t : texts)
    out.push_back(heatgen::parse_rational(t));
  return out;
}

#ifndef HEATGEN_TEST_DATA
#define HEATGEN_TEST_DATA "."
#endif

inline std::string data_file(const std::string &name) { return std::string(HEATGEN_TEST_DATA) + "/" + name; }
