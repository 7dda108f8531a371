#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace liespec {

/// Doubles rendered with 17 significant digits, enough to round-trip exactly.
std::string format_double(double v);

std::string json_escape(std::string_view s);

/// Streaming JSON writer with caller-controlled key order. Reports are
/// written through this (never through a map-backed DOM) so that identical
/// runs produce identical bytes.
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(std::string_view k);
  JsonWriter& value(double v);
  JsonWriter& value(int v);
  JsonWriter& value(long long v);
  JsonWriter& value(std::uint64_t v);
  JsonWriter& value(bool v);
  JsonWriter& value(std::string_view v);
  JsonWriter& value(const char* v) { return value(std::string_view(v)); }
  JsonWriter& null();

  std::string take() { return std::move(out_); }
  const std::string& str() const { return out_; }

 private:
  void separator();

  std::string out_;
  std::vector<bool> first_;
  bool after_key_ = false;
};

/// Current UTC time, ISO 8601 with seconds.
std::string iso8601_utc_now();

}  // namespace liespec
