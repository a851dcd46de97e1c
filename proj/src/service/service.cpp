#include "gasp/service/service.hpp"

#include <chrono>
#include <fstream>
#include <map>
#include <mutex>
#include <random>
#include <shared_mutex>
#include <vector>

#include "gasp/advisor/json.hpp"

namespace gasp::service {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct HttpError {
  int status;
  std::string message;
};

std::string new_id() {
  static thread_local std::random_device rd;
  std::string out;
  static const char* hex = "0123456789abcdef";
  for (int word = 0; word < 4; ++word) {
    std::uint32_t v = rd();
    for (int i = 0; i < 8; ++i, v >>= 4) out += hex[v & 0xf];
  }
  return out;
}

std::vector<std::string> split_path(std::string path) {
  if (auto q = path.find('?'); q != std::string::npos) path.resize(q);
  std::vector<std::string> parts;
  std::size_t i = 0;
  while (i < path.size()) {
    std::size_t j = path.find('/', i);
    if (j == std::string::npos) j = path.size();
    if (j > i) parts.push_back(path.substr(i, j - i));
    i = j + 1;
  }
  return parts;
}

json parse_json_body(const std::string& body) {
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw HttpError{400, "request body must be a JSON object"};
  return j;
}

advisor::PatientProfile profile_from_facts(const std::string& facts) {
  try {
    advisor::PatientProfile p = advisor::normalize_profile(advisor::parse_profile(facts));
    advisor::validate_profile(p);
    return p;
  } catch (const Error& e) {
    throw HttpError{422, std::string("unparseable profile: ") + e.what()};
  }
}

}  // namespace

struct AdvisoryService::Impl {
  struct Session {
    std::mutex mutex;
    advisor::PatientProfile profile;
    std::vector<json> reports;
  };

  advisor::Advisor advisor;
  ServiceOptions options;
  mutable std::shared_mutex sessions_mutex;
  std::map<std::string, std::shared_ptr<Session>> sessions;
  std::mutex log_mutex;

  Impl(Program kb, ServiceOptions opts) : advisor(std::move(kb), opts.advisor), options(std::move(opts)) { replay(); }

  void replay() {
    if (!options.persistence) return;
    std::ifstream in(*options.persistence);
    std::string line;
    while (std::getline(in, line)) {
      json j = json::parse(line, nullptr, false);
      if (j.is_discarded() || !j.contains("id") || !j.contains("facts")) continue;
      try {
        auto s = std::make_shared<Session>();
        s->profile = profile_from_facts(j["facts"].get<std::string>());
        sessions[j["id"].get<std::string>()] = s;
      } catch (const HttpError&) {
        // A corrupt line only loses that version.
      }
    }
  }

  void persist(const std::string& id, const advisor::PatientProfile& p) {
    if (!options.persistence) return;
    std::lock_guard lock(log_mutex);
    std::ofstream out(*options.persistence, std::ios::app);
    out << json{{"id", id}, {"facts", advisor::to_text(p)}}.dump() << "\n";
  }

  std::shared_ptr<Session> find(const std::string& id) const {
    std::shared_lock lock(sessions_mutex);
    auto it = sessions.find(id);
    if (it == sessions.end()) throw HttpError{404, "unknown session " + id};
    return it->second;
  }

  static json profile_body(const advisor::PatientProfile& p) {
    return {{"profile", advisor::to_json(p)}, {"profile_hash", advisor::profile_hash(p)}};
  }

  Response create(const Request& r) {
    std::string facts = r.body;
    auto first = facts.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && facts[first] == '{') {
      json j = parse_json_body(facts);
      if (!j.contains("facts") || !j["facts"].is_string()) throw HttpError{400, "expected {\"facts\": \"...\"}"};
      facts = j["facts"].get<std::string>();
    }
    auto s = std::make_shared<Session>();
    s->profile = profile_from_facts(facts);
    std::string id = new_id();
    {
      std::unique_lock lock(sessions_mutex);
      sessions[id] = s;
    }
    persist(id, s->profile);
    json body = profile_body(s->profile);
    body["id"] = id;
    return {201, body};
  }

  advisor::PatientProfile snapshot(Session& s) {
    std::lock_guard lock(s.mutex);
    return s.profile;
  }

  Response recommendations(Session& s) {
    advisor::PatientProfile p = snapshot(s);
    advisor::PhaseTimings t;
    auto set = advisor.enumerate_recommendations(p, &t);
    json list = json::array();
    for (const auto& r : set) list.push_back(advisor::to_json(r));
    return {200, {{"compliant_set", list}, {"profile_hash", advisor::profile_hash(p)}, {"timings_ms", advisor::to_json(t)}}};
  }

  Response check(Session& s, const Request& r) {
    json j = parse_json_body(r.body);
    advisor::Recommendation proposed;
    try {
      proposed = advisor::recommendation_from_json(j);
    } catch (const json::exception&) {
      throw HttpError{400, "expected {\"treatment\": ..., \"cor_class\": ...}"};
    }
    advisor::PatientProfile p = snapshot(s);
    advisor::ComplianceReport report;
    try {
      report = advisor.check_compliance(p, proposed);
    } catch (const UnknownAtom& e) {
      throw HttpError{400, e.what()};
    }
    json body = advisor::to_json(report);
    body["profile_hash"] = advisor::profile_hash(p);
    {
      std::lock_guard lock(s.mutex);
      s.reports.push_back(body);
      if (s.reports.size() > options.history_limit) s.reports.erase(s.reports.begin());
    }
    return {200, body};
  }

  Response evidence(const std::string& id, Session& s, const Request& r) {
    json j = parse_json_body(r.body);
    if (!j.contains("confirm") || !j["confirm"].is_array()) throw HttpError{400, "expected {\"confirm\": [atoms]}"};
    std::vector<Atom> atoms;
    for (const json& a : j["confirm"]) {
      if (!a.is_string()) throw HttpError{400, "atoms must be strings"};
      try {
        atoms.push_back(parse_atom(a.get<std::string>()));
      } catch (const Error& e) {
        throw HttpError{400, std::string("bad atom: ") + e.what()};
      }
    }
    std::lock_guard lock(s.mutex);
    try {
      s.profile = advisor::confirm_evidence(s.profile, atoms);
    } catch (const Error& e) {
      throw HttpError{400, e.what()};
    }
    persist(id, s.profile);
    return {200, profile_body(s.profile)};
  }

  Response profile(Session& s) {
    std::lock_guard lock(s.mutex);
    json body = profile_body(s.profile);
    body["reports"] = s.reports.size();
    return {200, body};
  }

  static Response vocabulary() {
    json atoms = json::array();
    for (const Atom& a : advisor::vocabulary()) atoms.push_back(to_string(a));
    json t(std::vector<std::string>(advisor::treatments().begin(), advisor::treatments().end()));
    json c(std::vector<std::string>(advisor::cor_classes().begin(), advisor::cor_classes().end()));
    return {200, {{"vocabulary", atoms}, {"treatments", t}, {"cor_classes", c}}};
  }

  Response route(const Request& r) {
    auto parts = split_path(r.path);
    auto method_is = [&](const char* m) {
      if (r.method != m) throw HttpError{405, "method " + r.method + " not allowed on " + r.path};
    };
    if (parts.size() == 1 && parts[0] == "health") {
      method_is("GET");
      return {200, {{"status", "ok"}, {"sessions", session_count()}}};
    }
    if (parts.size() == 1 && parts[0] == "vocabulary") {
      method_is("GET");
      return vocabulary();
    }
    if (!parts.empty() && parts[0] == "sessions") {
      if (parts.size() == 1) {
        method_is("POST");
        return create(r);
      }
      if (parts.size() == 3) {
        const std::string& id = parts[1];
        const std::string& what = parts[2];
        if (what == "profile") {
          method_is("GET");
          return profile(*find(id));
        }
        if (what == "recommendations") {
          method_is("GET");
          return recommendations(*find(id));
        }
        if (what == "check") {
          method_is("POST");
          return check(*find(id), r);
        }
        if (what == "evidence") {
          method_is("POST");
          auto s = find(id);
          return evidence(id, *s, r);
        }
      }
    }
    throw HttpError{404, "no route for " + r.path};
  }

  std::size_t session_count() const {
    std::shared_lock lock(sessions_mutex);
    return sessions.size();
  }
};

AdvisoryService::AdvisoryService(Program kb, ServiceOptions options)
    : impl_(std::make_unique<Impl>(std::move(kb), std::move(options))) {}

AdvisoryService::~AdvisoryService() = default;

std::size_t AdvisoryService::session_count() const { return impl_->session_count(); }

Response AdvisoryService::handle(const Request& request) {
  auto start = Clock::now();
  Response out;
  try {
    out = impl_->route(request);
  } catch (const HttpError& e) {
    out = {e.status, {{"error", e.message}}};
  } catch (const DepthLimitExceeded& e) {
    out = {500,
           {{"error", e.what()},
            {"diagnostic", "the solver hit its derivation depth limit; the query probably does not terminate"}}};
  } catch (const std::exception& e) {
    out = {500, {{"error", e.what()}}};
  }
  if (!out.body.contains("timings_ms")) out.body["timings_ms"] = json::object();
  out.body["timings_ms"]["total"] = ms_since(start);
  return out;
}

}  // namespace gasp::service
