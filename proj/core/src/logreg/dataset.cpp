#include "fedforge/logreg/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <string_view>

#include "fedforge/errors.hpp"
#include "fedforge/logreg/model.hpp"
#include "fedforge/rng.hpp"

namespace fedforge::logreg {
namespace {

std::string_view trim(std::string_view s) {
  constexpr std::string_view kSpace = " \t\r\n";
  const auto first = s.find_first_not_of(kSpace);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(kSpace);
  s = s.substr(first, last - first + 1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

[[noreturn]] void fail(const std::string& name, std::size_t line, const std::string& what) {
  throw ParseError(name + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

std::vector<double> Dataset::ages() const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.age);
  return out;
}

std::vector<int> Dataset::labels() const {
  std::vector<int> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.purchased);
  return out;
}

Dataset parse_sna_csv(std::istream& in, const std::string& name) {
  Dataset ds;
  ds.name = name;
  std::string line;
  std::size_t line_no = 0;

  std::optional<std::size_t> age_col;
  std::optional<std::size_t> purchased_col;
  std::size_t columns = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_fields(line);
    if (columns == 0) {
      columns = fields.size();
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (fields[i] == "Age") age_col = i;
        if (fields[i] == "Purchased") purchased_col = i;
      }
      if (!age_col) fail(name, line_no, "missing column Age");
      if (!purchased_col) fail(name, line_no, "missing column Purchased");
      continue;
    }
    if (fields.size() != columns) {
      fail(name, line_no, "expected " + std::to_string(columns) + " fields, got " +
                              std::to_string(fields.size()));
    }

    Sample sample;
    const auto age_text = fields[*age_col];
    auto [age_end, age_ec] =
        std::from_chars(age_text.data(), age_text.data() + age_text.size(), sample.age);
    if (age_ec != std::errc() || age_end != age_text.data() + age_text.size() ||
        !std::isfinite(sample.age)) {
      fail(name, line_no, "non-numeric Age '" + std::string(age_text) + "'");
    }
    const auto label_text = fields[*purchased_col];
    auto [lab_end, lab_ec] = std::from_chars(
        label_text.data(), label_text.data() + label_text.size(), sample.purchased);
    if (lab_ec != std::errc() || lab_end != label_text.data() + label_text.size() ||
        (sample.purchased != 0 && sample.purchased != 1)) {
      fail(name, line_no, "Purchased must be 0 or 1, got '" + std::string(label_text) + "'");
    }
    ds.rows.push_back(sample);
  }
  if (columns == 0) fail(name, line_no, "missing header row");
  if (ds.rows.empty()) fail(name, line_no, "dataset has no rows");
  return ds;
}

Dataset load_sna_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open dataset " + path.string());
  return parse_sna_csv(in, path.filename().string());
}

Dataset gen_synthetic(std::uint64_t seed, std::size_t n, double true_b0, double true_b1) {
  if (n < 2) throw DomainError("synthetic dataset needs at least 2 rows");
  SplitMix64 rng(seed);
  std::vector<double> ages(n);
  for (auto& a : ages) a = 18.0 + 42.0 * rng.next_double();
  const std::vector<double> z = normalize(ages);
  const std::vector<double> p = predict(z, ModelVector{true_b0, true_b1});

  Dataset ds;
  ds.name = "synthetic-" + std::to_string(seed);
  ds.rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    ds.rows.push_back({ages[i], rng.next_double() < p[i] ? 1 : 0});
  }
  return ds;
}

void write_sna_csv(const Dataset& ds, std::ostream& out, std::uint64_t seed) {
  SplitMix64 rng(seed ^ 0x5eed5eedull);
  out << "User ID,Gender,Age,EstimatedSalary,Purchased\n";
  char buf[64];
  for (std::size_t i = 0; i < ds.rows.size(); ++i) {
    const auto& r = ds.rows[i];
    const auto user_id = 15600000 + 1000 * i + rng.next_below(1000);
    const char* gender = (rng.next() & 1) ? "Male" : "Female";
    const auto salary = 15000 + 1000 * rng.next_below(136);
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, r.age);
    out << user_id << ',' << gender << ',' << std::string_view(buf, end - buf) << ','
        << salary << ',' << r.purchased << '\n';
  }
}

}  // namespace fedforge::logreg
