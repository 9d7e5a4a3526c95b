// Copyright 2026 The disctok Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "disctok/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>

#include "disctok/error.hpp"

namespace disctok {

ContingencyTable ContingencyTable::Transposed() const {
  ContingencyTable t(num_phones, num_tokens);
  for (std::size_t i = 0; i < num_tokens; ++i) {
    for (std::size_t j = 0; j < num_phones; ++j) t.counts[j * num_tokens + i] = at(i, j);
  }
  t.total = total;
  return t;
}

PhoneAlignment ReadPhoneLabels(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open phone labels " + path.string());
  PhoneAlignment out;
  std::unordered_map<std::string, std::uint32_t> index;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error(ErrorCode::kInvalidConfig,
                  path.string() + ":" + std::to_string(line_no) + ": expected id<TAB>labels");
    }
    std::string id = line.substr(0, tab);
    std::vector<std::uint32_t> seq;
    std::istringstream fields(line.substr(tab + 1));
    std::string sym;
    while (fields >> sym) {
      auto [it, inserted] = index.try_emplace(sym, static_cast<std::uint32_t>(out.phone_names.size()));
      if (inserted) out.phone_names.push_back(sym);
      seq.push_back(it->second);
    }
    if (!out.labels.emplace(std::move(id), std::move(seq)).second) {
      throw Error(ErrorCode::kInvalidConfig, path.string() + ": duplicate utterance id");
    }
  }
  return out;
}

ContingencyTable JointCounts(const std::vector<TokenSequence>& tokens,
                             const std::vector<std::vector<std::uint32_t>>& phones,
                             std::size_t num_phones) {
  if (tokens.size() != phones.size()) {
    throw Error(ErrorCode::kLengthMismatch, "token and phone corpora differ in utterance count");
  }
  std::size_t num_tokens = 0;
  for (const auto& seq : tokens) num_tokens = std::max<std::size_t>(num_tokens, seq.vocab_size);

  ContingencyTable table(num_tokens, num_phones);
  std::exception_ptr failure;
  std::mutex mu;
  const auto n = static_cast<std::int64_t>(tokens.size());
  // Per-thread integer tables merged by addition; the result is exact
  // and independent of scheduling.
#pragma omp parallel
  {
    ContingencyTable local(num_tokens, num_phones);
#pragma omp for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < n; ++i) {
      try {
        const auto& seq = tokens[static_cast<std::size_t>(i)];
        const auto& lab = phones[static_cast<std::size_t>(i)];
        if (seq.run_lengths) {
          throw Error(ErrorCode::kLengthMismatch,
                      seq.utterance_id + ": metrics need raw per-frame tokens, got a deduped stream");
        }
        if (seq.tokens.size() != lab.size()) {
          throw Error(ErrorCode::kLengthMismatch,
                      seq.utterance_id + ": " + std::to_string(seq.tokens.size()) + " tokens vs " +
                          std::to_string(lab.size()) + " phone labels");
        }
        for (std::size_t f = 0; f < lab.size(); ++f) {
          if (lab[f] >= num_phones || seq.tokens[f] >= num_tokens) {
            throw Error(ErrorCode::kCorruptPayload, seq.utterance_id + ": label out of range");
          }
          local.Add(seq.tokens[f], lab[f]);
        }
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
      }
    }
    std::lock_guard lock(mu);
    for (std::size_t c = 0; c < local.counts.size(); ++c) table.counts[c] += local.counts[c];
    table.total += local.total;
  }
  if (failure) std::rethrow_exception(failure);
  return table;
}

ContingencyTable JointCounts(const std::vector<TokenSequence>& tokens, const PhoneAlignment& phones) {
  std::vector<std::vector<std::uint32_t>> aligned;
  aligned.reserve(tokens.size());
  for (const auto& seq : tokens) {
    const auto it = phones.labels.find(seq.utterance_id);
    if (it == phones.labels.end()) {
      throw Error(ErrorCode::kLengthMismatch, seq.utterance_id + ": no phone labels");
    }
    aligned.push_back(it->second);
  }
  return JointCounts(tokens, aligned, phones.phone_names.size());
}

namespace {

void RequireNonEmpty(const ContingencyTable& table) {
  if (table.total == 0) throw Error(ErrorCode::kEmptyTable, "contingency table has no frames");
}

}  // namespace

double PhonePurity(const ContingencyTable& table) {
  RequireNonEmpty(table);
  std::uint64_t acc = 0;
  for (std::size_t t = 0; t < table.num_tokens; ++t) {
    std::uint64_t best = 0;
    for (std::size_t y = 0; y < table.num_phones; ++y) best = std::max(best, table.at(t, y));
    acc += best;
  }
  return static_cast<double>(acc) / static_cast<double>(table.total);
}

double TokenPurity(const ContingencyTable& table) {
  RequireNonEmpty(table);
  std::uint64_t acc = 0;
  for (std::size_t y = 0; y < table.num_phones; ++y) {
    std::uint64_t best = 0;
    for (std::size_t t = 0; t < table.num_tokens; ++t) best = std::max(best, table.at(t, y));
    acc += best;
  }
  return static_cast<double>(acc) / static_cast<double>(table.total);
}

double Pnmi(const ContingencyTable& table) {
  RequireNonEmpty(table);
  const double n = static_cast<double>(table.total);
  std::vector<double> token_marg(table.num_tokens, 0.0), phone_marg(table.num_phones, 0.0);
  for (std::size_t t = 0; t < table.num_tokens; ++t) {
    for (std::size_t y = 0; y < table.num_phones; ++y) {
      const double c = static_cast<double>(table.at(t, y));
      token_marg[t] += c;
      phone_marg[y] += c;
    }
  }
  double h_phone = 0.0;
  for (double c : phone_marg) {
    if (c > 0.0) h_phone -= (c / n) * std::log(c / n);
  }
  if (!(h_phone > 0.0)) {
    throw Error(ErrorCode::kDegeneratePhoneDistribution, "phone entropy is zero");
  }
  double mi = 0.0;
  for (std::size_t t = 0; t < table.num_tokens; ++t) {
    for (std::size_t y = 0; y < table.num_phones; ++y) {
      const double c = static_cast<double>(table.at(t, y));
      if (c > 0.0) mi += (c / n) * std::log(c * n / (token_marg[t] * phone_marg[y]));
    }
  }
  return std::clamp(mi / h_phone, 0.0, 1.0);
}

QualityReport EvaluateQuality(const ContingencyTable& table) {
  return {PhonePurity(table), TokenPurity(table), Pnmi(table), table.total};
}

SplitLengthStats LengthStats(const std::string& split_name, const LengthTable& before,
                             const LengthTable& after) {
  if (before.size() != after.size() ||
      !std::equal(before.begin(), before.end(), after.begin(),
                  [](const auto& a, const auto& b) { return a.first == b.first; })) {
    throw Error(ErrorCode::kIdSetMismatch, split_name + ": utterance ids differ");
  }
  SplitLengthStats s;
  s.split_name = split_name;
  s.num_utts = before.size();
  if (s.num_utts == 0) return s;
  double b = 0.0, a = 0.0;
  for (const auto& [id, len] : before) b += static_cast<double>(len);
  for (const auto& [id, len] : after) a += static_cast<double>(len);
  s.before_mean = b / static_cast<double>(s.num_utts);
  s.mean_length = a / static_cast<double>(s.num_utts);
  s.reduction_fraction = s.before_mean > 0.0 ? 1.0 - s.mean_length / s.before_mean : 0.0;
  return s;
}

}  // namespace disctok
