#include "qso3/textio.hpp"

#include <cstdio>
#include <stdexcept>

namespace qso3 {

std::string format_double(double x) {
  if (x == 0.0) x = 0.0;  // normalize -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::vector<double> parse_grid(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty grid spec");
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    double start, stop;
    int count;
    if (std::sscanf(text.c_str(), "%lf:%lf:%d", &start, &stop, &count) != 3 || count < 1)
      throw std::invalid_argument("grid spec must be start:stop:count");
    for (int i = 0; i < count; ++i)
      out.push_back(count == 1 ? start : start + (stop - start) * i / (count - 1));
    return out;
  }
  size_t pos = 0;
  while (pos < text.size()) {
    size_t next = text.find(',', pos);
    if (next == std::string::npos) next = text.size();
    out.push_back(std::stod(text.substr(pos, next - pos)));
    pos = next + 1;
  }
  if (out.empty()) throw std::invalid_argument("empty grid spec");
  return out;
}

std::pair<int, int> parse_int_range(const std::string& text) {
  int a, b;
  if (std::sscanf(text.c_str(), "%d:%d", &a, &b) == 2) {
    if (b < a) throw std::invalid_argument("range upper bound below lower bound");
    return {a, b};
  }
  if (std::sscanf(text.c_str(), "%d", &a) == 1) return {a, a};
  throw std::invalid_argument("expected integer or a:b range");
}

}  // namespace qso3
