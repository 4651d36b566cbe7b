#pragma once

#include <cstdint>
#include <cstdio>
#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>

namespace sdm {

/// 17 significant digits; enough to round-trip any double bit-exactly.
inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

/// Minimal RFC-4180 writer: header row, comma separation, quoting only when
/// a field requires it.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}

  void header(std::initializer_list<std::string_view> names) {
    bool first = true;
    for (auto n : names) {
      if (!first) os_ << ',';
      write_field(std::string(n));
      first = false;
    }
    os_ << '\n';
  }

  class Row {
   public:
    explicit Row(CsvWriter& w) : w_(w) {}
    ~Row() { w_.os_ << '\n'; }
    Row& col(double v) { return raw(format_g17(v)); }
    Row& col(int v) { return raw(std::to_string(v)); }
    Row& col(std::int64_t v) { return raw(std::to_string(v)); }
    Row& col(const std::string& v) {
      sep();
      w_.write_field(v);
      return *this;
    }

   private:
    Row& raw(const std::string& s) {
      sep();
      w_.os_ << s;
      return *this;
    }
    void sep() {
      if (!first_) w_.os_ << ',';
      first_ = false;
    }
    CsvWriter& w_;
    bool first_ = true;
  };

  Row row() { return Row(*this); }

 private:
  void write_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) {
      os_ << s;
      return;
    }
    os_ << '"';
    for (char c : s) {
      if (c == '"') os_ << '"';
      os_ << c;
    }
    os_ << '"';
  }

  std::ostream& os_;
  friend class Row;
};

}  // namespace sdm
