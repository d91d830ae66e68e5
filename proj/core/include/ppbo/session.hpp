// Copyright 2026 The PPBO Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ppbo/acquisition.hpp"
#include "ppbo/domain.hpp"
#include "ppbo/preference_model.hpp"
#include "ppbo/rng.hpp"

namespace ppbo {

inline constexpr int kSessionSchemaVersion = 1;

struct SessionConfig {
  Domain domain = Domain::unit_cube(2);
  Hyperparameters hyper;
  TgnSchedule schedule;
  AcquisitionConfig acquisition;
  IncumbentOptions incumbent;
  int budget = 0;
  std::uint64_t seed = 0;
  // Reference of the initial coordinate queries, native units. Shared by
  // every session with the same config; defaults to the domain centre.
  Vector initial_reference;

  // Hyper/schedule defaults for the domain's dimension, strategy ei-ext with
  // coordinate projections, reference at the centre.
  static SessionConfig defaults_for(const Domain& domain);
  // Throws ValidationError naming the offending field.
  void validate() const;
};

// {"domain": {...}, "budget": n, "seed", "hyper", "schedule", "acquisition",
//  "initial_reference"}. Missing keys take SessionConfig::defaults_for.
SessionConfig session_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SessionConfig& cfg);

struct HistoryEntry {
  ProjectiveQuery query;
  double alpha = 0.0;
  std::int64_t timestamp_ms = 0;
  std::string token;
};

struct SessionState {
  std::string id;
  std::string client_token;
  SessionConfig config;
  Dataset dataset;  // one observation per history entry
  std::vector<HistoryEntry> history;
  std::optional<ProjectiveQuery> pending;
  Incumbent incumbent{UnitPoint::center(2), 0.0};
  std::shared_ptr<const ModelState> model;
  Rng pseudo_rng;
  Rng acquisition_rng;
  Rng incumbent_rng;

  bool completed() const {
    return static_cast<int>(history.size()) >= config.budget;
  }
};

// Fresh session: empty model, incumbent at the centre, e_1 pending.
SessionState new_session(std::string id, const SessionConfig& config);

// Appends the answer to the pending query, refits, moves the incumbent and
// issues the next query (or completes the session at the budget). Pure: the
// caller owns persistence. Replaying a session's history through this
// function from new_session reproduces its state bitwise.
SessionState apply_feedback(const SessionState& state, double alpha,
                            const std::string& token,
                            std::int64_t timestamp_ms);

struct SliceView {
  std::vector<double> alphas;
  std::vector<double> means;
  std::vector<double> sds;
  std::vector<Vector> points_native;
};

// Predictive mean and sd of the utility along the pending query's line.
SliceView compute_slice(const SessionState& state, int resolution);

// Full persisted document, including model and RNG states.
nlohmann::json session_to_document(const SessionState& state);
// Throws FormatError on malformed documents or other schema versions.
SessionState session_from_document(const nlohmann::json& doc);

void save_session(const SessionState& state, const std::filesystem::path& path);
SessionState load_session(const std::filesystem::path& path);

// Client-facing views, native units.
nlohmann::json query_view(const SessionState& state);
nlohmann::json state_view(const SessionState& state);
nlohmann::json slice_view(const SessionState& state, const SliceView& slice);

// Sessions under a data directory, one <id>.json file each, written via a
// temporary file and rename. Feedback is serialized per session; reads use
// the last committed snapshot and never block on a running refit.
class SessionStore {
 public:
  explicit SessionStore(std::filesystem::path data_dir);

  // Same client token, same session: a repeated create returns the original.
  std::shared_ptr<const SessionState> create(const SessionConfig& config,
                                             const std::string& client_token = "");

  // A token already in the history returns the current state unchanged.
  std::shared_ptr<const SessionState> submit_feedback(const std::string& id,
                                                      double alpha,
                                                      const std::string& token);

  std::shared_ptr<const SessionState> get(const std::string& id) const;
  SliceView slice(const std::string& id, int resolution) const;

  std::vector<std::string> ids() const;
  const std::filesystem::path& data_dir() const { return data_dir_; }

  // Test hook run after a state is persisted and before it is published.
  // Throwing from it simulates a crash between the write and the response.
  std::function<void(const SessionState&)> after_persist;

 private:
  struct Entry {
    std::mutex write_mu;
    mutable std::mutex snapshot_mu;
    std::shared_ptr<const SessionState> snapshot;

    std::shared_ptr<const SessionState> load() const;
    void store(std::shared_ptr<const SessionState> s);
  };

  std::shared_ptr<Entry> entry(const std::string& id) const;
  void persist(const SessionState& state) const;
  std::filesystem::path path_for(const std::string& id) const;

  std::filesystem::path data_dir_;
  mutable std::mutex index_mu_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::map<std::string, std::string> by_token_;
  std::map<std::string, std::string> unreadable_;  // id -> load error
};

}  // namespace ppbo
