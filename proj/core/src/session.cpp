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

#include "ppbo/session.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "ppbo/config.hpp"
#include "ppbo/errors.hpp"
#include "ppbo/model_io.hpp"

namespace ppbo {

namespace {

using nlohmann::json;

std::vector<double> to_std(const Vector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

Vector to_eigen(const json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(values.data(),
                                  static_cast<Eigen::Index>(values.size()));
}

std::string rng_state(const Rng& rng) {
  std::ostringstream os;
  os << rng;
  return os.str();
}

Rng rng_from_state(const std::string& text) {
  std::istringstream is(text);
  Rng rng;
  is >> rng;
  if (is.fail()) throw FormatError("unreadable generator state");
  return rng;
}

std::int64_t now_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

std::string random_id() {
  std::random_device rd;
  std::ostringstream os;
  os << std::hex << std::setfill('0');
  for (int i = 0; i < 2; ++i) os << std::setw(8) << rd();
  return os.str();
}

// Query the session issues after `answered` answers. The first D queries
// sweep the coordinates from the shared initial reference.
std::optional<ProjectiveQuery> next_pending(const SessionState& s) {
  const int dim = s.config.domain.dim();
  const int answered = static_cast<int>(s.history.size());
  if (answered >= s.config.budget) return std::nullopt;
  if (answered < dim) {
    const UnitPoint ref =
        normalize_point(s.config.domain, s.config.initial_reference);
    return ProjectiveQuery::with_reference(coordinate_projection(dim, answered),
                                           ref.coords());
  }
  return std::nullopt;
}

json native_query(const Domain& domain, const ProjectiveQuery& q) {
  return {{"xi", to_std(q.xi().values())},
          {"support", q.xi().support()},
          {"start_native", to_std(denormalize_point(domain, embed(0.0, q)))},
          {"end_native", to_std(denormalize_point(domain, embed(1.0, q)))}};
}

}  // namespace

SessionConfig SessionConfig::defaults_for(const Domain& domain) {
  SessionConfig cfg;
  cfg.domain = domain;
  cfg.hyper = Hyperparameters::defaults_for(domain.dim());
  cfg.schedule = TgnSchedule::defaults_for(domain.dim());
  cfg.acquisition.strategy = Strategy::kEiExploit;
  cfg.acquisition.coordinate_only = true;
  cfg.initial_reference = 0.5 * (domain.lower() + domain.upper());
  return cfg;
}

void SessionConfig::validate() const {
  const int dim = domain.dim();
  if (budget <= dim) {
    throw ValidationError("budget", "budget must exceed the dimension (" +
                                        std::to_string(dim) + ")");
  }
  if (initial_reference.size() != dim) {
    throw ValidationError("initial_reference",
                          "initial_reference must have one entry per dimension");
  }
  if (!domain.contains(initial_reference)) {
    throw ValidationError("initial_reference",
                          "initial_reference lies outside the domain");
  }
  try {
    hyper.validate();
  } catch (const ArgumentError& e) {
    throw ValidationError("hyper", e.what());
  }
  try {
    schedule.validate();
  } catch (const ArgumentError& e) {
    throw ValidationError("schedule", e.what());
  }
  try {
    acquisition.validate();
  } catch (const ArgumentError& e) {
    throw ValidationError("acquisition", e.what());
  }
}

SessionConfig session_config_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("config", "config must be an object");
  if (!j.contains("domain")) {
    throw ValidationError("domain", "domain is required");
  }
  SessionConfig cfg = SessionConfig::defaults_for(domain_from_json(j.at("domain")));
  if (!j.contains("budget") || !j.at("budget").is_number_integer()) {
    throw ValidationError("budget", "budget must be an integer");
  }
  cfg.budget = j.at("budget").get<int>();
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_integer() || j.at("seed").get<long long>() < 0) {
      throw ValidationError("seed", "seed must be a nonnegative integer");
    }
    cfg.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("hyper")) cfg.hyper = hyper_from_json(j.at("hyper"), cfg.hyper);
  if (j.contains("schedule")) {
    cfg.schedule = schedule_from_json(j.at("schedule"), cfg.schedule);
  }
  if (j.contains("acquisition")) {
    cfg.acquisition = acquisition_from_json(j.at("acquisition"), cfg.acquisition);
  }
  if (j.contains("initial_reference")) {
    const json& r = j.at("initial_reference");
    if (!r.is_array()) {
      throw ValidationError("initial_reference",
                            "initial_reference must be an array of numbers");
    }
    try {
      cfg.initial_reference = to_eigen(r);
    } catch (const json::exception&) {
      throw ValidationError("initial_reference",
                            "initial_reference must be an array of numbers");
    }
  }
  cfg.validate();
  return cfg;
}

json to_json(const SessionConfig& cfg) {
  return {{"domain", to_json(cfg.domain)},
          {"hyper", to_json(cfg.hyper)},
          {"schedule", to_json(cfg.schedule)},
          {"acquisition", to_json(cfg.acquisition)},
          {"budget", cfg.budget},
          {"seed", cfg.seed},
          {"initial_reference", to_std(cfg.initial_reference)}};
}

SessionState new_session(std::string id, const SessionConfig& config) {
  config.validate();
  const int dim = config.domain.dim();
  SessionState s;
  s.id = std::move(id);
  s.config = config;
  s.pseudo_rng = make_rng(config.seed, Stream::kPseudoObservations);
  s.acquisition_rng = make_rng(config.seed, Stream::kAcquisition);
  s.incumbent_rng = make_rng(config.seed, Stream::kIncumbent);
  s.model = std::make_shared<const ModelState>(fit_map({}, config.hyper, dim));
  s.incumbent = Incumbent{UnitPoint::center(dim), 0.0};
  s.pending = next_pending(s);
  return s;
}

SessionState apply_feedback(const SessionState& state, double alpha,
                            const std::string& token,
                            std::int64_t timestamp_ms) {
  if (!state.pending) {
    throw ConflictError(state.completed() ? "session has reached its budget"
                                          : "no query is pending");
  }
  if (!std::isfinite(alpha) || alpha < 0.0 || alpha > 1.0) {
    throw ValidationError("alpha", "alpha must lie in [0, 1]");
  }
  SessionState s = state;
  const ProjectiveQuery query = *s.pending;
  const std::size_t index = s.dataset.size();
  s.dataset.push_back(
      make_observation(alpha, query, s.config.schedule, index, s.pseudo_rng));
  s.history.push_back({query, alpha, timestamp_ms, token});

  FitOptions options;
  options.initial_weights = warm_start_weights(*state.model, s.dataset);
  auto model = std::make_shared<const ModelState>(
      fit_map(s.dataset, s.config.hyper, s.config.domain.dim(), options));
  s.model = model;
  s.incumbent = posterior_mean_argmax(*model, s.incumbent_rng, s.config.incumbent);
  s.pending = next_pending(s);
  if (!s.pending && !s.completed()) {
    s.pending = select_next_query(*model, s.incumbent, s.config.acquisition,
                                  s.history.size(), s.acquisition_rng)
                    .query;
  }
  return s;
}

SliceView compute_slice(const SessionState& state, int resolution) {
  if (resolution < 2) {
    throw ValidationError("resolution", "resolution must be at least 2");
  }
  if (!state.pending) throw ConflictError("no query is pending");
  const ProjectiveQuery& q = *state.pending;
  const FeasibleInterval interval = feasible_interval(q);
  SliceView view;
  Matrix points(resolution, state.config.domain.dim());
  for (int i = 0; i < resolution; ++i) {
    const double a = i + 1 == resolution
                         ? interval.hi
                         : interval.lo + interval.length() * i / (resolution - 1);
    const UnitPoint p = embed(a, q);
    points.row(i) = p.coords().transpose();
    view.alphas.push_back(a);
    view.points_native.push_back(denormalize_point(state.config.domain, p));
  }
  const MarginalPrediction pred = predict_marginal(*state.model, points);
  for (int i = 0; i < resolution; ++i) {
    view.means.push_back(pred.mean[i]);
    view.sds.push_back(std::sqrt(std::max(pred.variance[i], 0.0)));
  }
  return view;
}

json session_to_document(const SessionState& s) {
  json history = json::array();
  for (std::size_t i = 0; i < s.history.size(); ++i) {
    const HistoryEntry& h = s.history[i];
    json e = to_json(s.dataset[i]);
    e["timestamp_ms"] = h.timestamp_ms;
    e["token"] = h.token;
    history.push_back(std::move(e));
  }
  json doc = {{"schema_version", kSessionSchemaVersion},
              {"id", s.id},
              {"client_token", s.client_token},
              {"config", to_json(s.config)},
              {"history", std::move(history)},
              {"model", model_to_json(*s.model)},
              {"incumbent",
               {{"x", to_std(s.incumbent.x.coords())}, {"mu", s.incumbent.mu}}},
              {"rng",
               {{"pseudo", rng_state(s.pseudo_rng)},
                {"acquisition", rng_state(s.acquisition_rng)},
                {"incumbent", rng_state(s.incumbent_rng)}}}};
  doc["pending"] = s.pending ? to_json(*s.pending) : json(nullptr);
  return doc;
}

SessionState session_from_document(const json& doc) {
  if (!doc.is_object() || !doc.contains("schema_version")) {
    throw FormatError("session document has no schema_version");
  }
  const int version = doc.at("schema_version").get<int>();
  if (version != kSessionSchemaVersion) {
    throw FormatError("session schema version " + std::to_string(version) +
                      " is not supported (expected " +
                      std::to_string(kSessionSchemaVersion) +
                      "); migrate the file by replaying its history into a "
                      "new session");
  }
  try {
    SessionState s;
    s.id = doc.at("id").get<std::string>();
    s.client_token = doc.at("client_token").get<std::string>();
    s.config = session_config_from_json(doc.at("config"));
    for (const json& e : doc.at("history")) {
      Observation obs = observation_from_json(e);
      s.history.push_back({obs.query, obs.alpha,
                           e.at("timestamp_ms").get<std::int64_t>(),
                           e.at("token").get<std::string>()});
      s.dataset.push_back(std::move(obs));
    }
    s.model = std::make_shared<const ModelState>(model_from_json(doc.at("model")));
    if (s.model->dataset.size() != s.dataset.size()) {
      throw FormatError("model and history disagree");
    }
    const json& inc = doc.at("incumbent");
    s.incumbent = Incumbent{UnitPoint(to_eigen(inc.at("x"))),
                            inc.at("mu").get<double>()};
    const json& rng = doc.at("rng");
    s.pseudo_rng = rng_from_state(rng.at("pseudo").get<std::string>());
    s.acquisition_rng = rng_from_state(rng.at("acquisition").get<std::string>());
    s.incumbent_rng = rng_from_state(rng.at("incumbent").get<std::string>());
    if (!doc.at("pending").is_null()) s.pending = query_from_json(doc.at("pending"));
    return s;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed session document: ") + e.what());
  } catch (const FormatError&) {
    throw;
  } catch (const Error& e) {
    throw FormatError(std::string("invalid session document: ") + e.what());
  }
}

void save_session(const SessionState& state, const std::filesystem::path& path) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot write " + tmp.string());
    out << session_to_document(state).dump();
    out.flush();
    if (!out) throw FormatError("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

SessionState load_session(const std::filesystem::path& path) {
  return session_from_document(read_json_file(path.string()));
}

json query_view(const SessionState& s) {
  json j = {{"session_id", s.id},
            {"iteration", s.history.size()},
            {"budget", s.config.budget},
            {"completed", s.completed()}};
  j["query"] = s.pending ? native_query(s.config.domain, *s.pending) : json(nullptr);
  return j;
}

json state_view(const SessionState& s) {
  const Domain& domain = s.config.domain;
  json history = json::array();
  for (const HistoryEntry& h : s.history) {
    json e = native_query(domain, h.query);
    e["alpha"] = h.alpha;
    e["point_native"] = to_std(denormalize_point(domain, embed(h.alpha, h.query)));
    e["timestamp_ms"] = h.timestamp_ms;
    history.push_back(std::move(e));
  }
  json j = query_view(s);
  j["config"] = to_json(s.config);
  j["history"] = std::move(history);
  j["incumbent"] = {{"x_native", to_std(denormalize_point(domain, s.incumbent.x))},
                    {"mu", s.incumbent.mu}};
  return j;
}

json slice_view(const SessionState& s, const SliceView& slice) {
  json points = json::array();
  for (const Vector& p : slice.points_native) points.push_back(to_std(p));
  return {{"session_id", s.id},
          {"iteration", s.history.size()},
          {"alphas", slice.alphas},
          {"means", slice.means},
          {"sds", slice.sds},
          {"points_native", std::move(points)}};
}

// --- store -------------------------------------------------------------------

std::shared_ptr<const SessionState> SessionStore::Entry::load() const {
  std::lock_guard lock(snapshot_mu);
  return snapshot;
}

void SessionStore::Entry::store(std::shared_ptr<const SessionState> s) {
  std::lock_guard lock(snapshot_mu);
  snapshot = std::move(s);
}

SessionStore::SessionStore(std::filesystem::path data_dir)
    : data_dir_(std::move(data_dir)) {
  std::filesystem::create_directories(data_dir_);
  for (const auto& file : std::filesystem::directory_iterator(data_dir_)) {
    if (file.path().extension() != ".json") continue;
    const std::string id = file.path().stem().string();
    try {
      auto entry = std::make_shared<Entry>();
      auto state = std::make_shared<const SessionState>(load_session(file.path()));
      if (!state->client_token.empty()) by_token_[state->client_token] = id;
      entry->store(std::move(state));
      sessions_[id] = std::move(entry);
    } catch (const Error& e) {
      unreadable_[id] = e.what();
      std::cerr << "ppbo: skipping " << file.path() << ": " << e.what() << '\n';
    }
  }
}

std::filesystem::path SessionStore::path_for(const std::string& id) const {
  return data_dir_ / (id + ".json");
}

void SessionStore::persist(const SessionState& state) const {
  save_session(state, path_for(state.id));
}

std::shared_ptr<SessionStore::Entry> SessionStore::entry(
    const std::string& id) const {
  std::lock_guard lock(index_mu_);
  if (auto it = sessions_.find(id); it != sessions_.end()) return it->second;
  if (auto it = unreadable_.find(id); it != unreadable_.end()) {
    throw FormatError("session " + id + " is unreadable: " + it->second);
  }
  throw NotFoundError("unknown session " + id);
}

std::shared_ptr<const SessionState> SessionStore::create(
    const SessionConfig& config, const std::string& client_token) {
  config.validate();
  std::lock_guard lock(index_mu_);
  if (!client_token.empty()) {
    if (auto it = by_token_.find(client_token); it != by_token_.end()) {
      return sessions_.at(it->second)->load();
    }
  }
  std::string id;
  do {
    id = random_id();
  } while (sessions_.count(id) != 0 || unreadable_.count(id) != 0);
  SessionState state = new_session(id, config);
  state.client_token = client_token;
  persist(state);
  auto entry = std::make_shared<Entry>();
  auto snapshot = std::make_shared<const SessionState>(std::move(state));
  entry->store(snapshot);
  sessions_[id] = entry;
  if (!client_token.empty()) by_token_[client_token] = id;
  return snapshot;
}

std::shared_ptr<const SessionState> SessionStore::submit_feedback(
    const std::string& id, double alpha, const std::string& token) {
  if (token.empty()) throw ValidationError("token", "token is required");
  std::shared_ptr<Entry> e = entry(id);
  std::lock_guard write(e->write_mu);
  std::shared_ptr<const SessionState> current = e->load();
  for (const HistoryEntry& h : current->history) {
    if (h.token == token) return current;
  }
  auto next = std::make_shared<const SessionState>(
      apply_feedback(*current, alpha, token, now_ms()));
  persist(*next);
  e->store(next);
  if (after_persist) after_persist(*next);
  return next;
}

std::shared_ptr<const SessionState> SessionStore::get(const std::string& id) const {
  return entry(id)->load();
}

SliceView SessionStore::slice(const std::string& id, int resolution) const {
  return compute_slice(*get(id), resolution);
}

std::vector<std::string> SessionStore::ids() const {
  std::lock_guard lock(index_mu_);
  std::vector<std::string> out;
  for (const auto& [id, entry] : sessions_) out.push_back(id);
  return out;
}

}  // namespace ppbo
