#include "spherefv/csv.hpp"

#include <charconv>
#include <system_error>

#include "spherefv/errors.hpp"

namespace spherefv {

std::string format_double(double value) {
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) throw Error("format_double: conversion failed");
  return std::string(buffer, end);
}

double parse_double(const std::string& text) {
  double value = 0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) throw ConfigError("not a number: '" + text + "'");
  return value;
}

}  // namespace spherefv
