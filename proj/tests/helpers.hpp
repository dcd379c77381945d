// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "citeaccel/core.hpp"

namespace citeaccel::testing {

struct PaperSpec {
  int pub_year;
  std::map<int, std::int64_t> citations;
};

inline AuthorRecord per_paper(std::vector<PaperSpec> papers, std::string id = "a") {
  AuthorRecord r;
  r.author_id = std::move(id);
  r.granularity = Granularity::per_paper;
  int i = 0;
  for (auto& p : papers) r.papers.push_back({"p" + std::to_string(i++), p.pub_year, std::move(p.citations)});
  return r;
}

// Aggregate record whose cumulative series at t = 0, 1, ... is `n`.
inline AuthorRecord from_cumulative(const std::vector<double>& n, int start = 2000,
                                    bool synthetic = true, std::string id = "agg") {
  AuthorRecord r;
  r.author_id = std::move(id);
  r.granularity = Granularity::aggregate;
  r.synthetic = synthetic;
  r.career_start_year = start;
  for (std::size_t t = 0; t < n.size(); ++t)
    r.yearly_citations[start + static_cast<int>(t)] = t == 0 ? n[0] : n[t] - n[t - 1];
  return r;
}

template <typename F>
std::vector<double> sample(F&& f, int horizon) {
  std::vector<double> out;
  for (int t = 0; t <= horizon; ++t) out.push_back(f(static_cast<double>(t)));
  return out;
}

}  // namespace citeaccel::testing
