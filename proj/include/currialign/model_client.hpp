// Copyright 2026 The CurriAlign Authors
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

#ifndef CURRIALIGN_MODEL_CLIENT_HPP_
#define CURRIALIGN_MODEL_CLIENT_HPP_

// Remote chat-completion client for topic extraction and zero-shot area
// classification, plus an offline replay transport keyed by the SHA-256 of the
// serialized request body.

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "httplib.h"
#include "json.hpp"

#include "currialign/classify.hpp"
#include "currialign/domain.hpp"
#include "currialign/error.hpp"
#include "currialign/ingest.hpp"

namespace currialign {

struct ModelServiceConfig {
  std::string base_url;
  std::string model_name = "classify-lm";
  std::string api_key;  // never persisted
  double temperature = 0.0;
  std::chrono::milliseconds timeout{30000};
  std::size_t max_in_flight = 4;

  void Validate() const {
    if (timeout.count() <= 0) throw Error(ErrorCode::kInvalidArgument, "timeout must be > 0");
    if (max_in_flight < 1) throw Error(ErrorCode::kInvalidArgument, "max_in_flight must be >= 1");
  }

  // Reads CURRIALIGN_MODEL_URL, CURRIALIGN_MODEL_KEY and CURRIALIGN_MODEL_NAME.
  static ModelServiceConfig FromEnvironment() {
    ModelServiceConfig c;
    if (const char* v = std::getenv("CURRIALIGN_MODEL_URL")) c.base_url = v;
    if (const char* v = std::getenv("CURRIALIGN_MODEL_KEY")) c.api_key = v;
    if (const char* v = std::getenv("CURRIALIGN_MODEL_NAME")) c.model_name = v;
    return c;
  }
};

inline std::string BuildChatRequestBody(const ModelServiceConfig& config,
                                        std::string_view system, std::string_view user) {
  nlohmann::ordered_json body;
  body["model"] = config.model_name;
  body["temperature"] = config.temperature;
  body["messages"] = nlohmann::ordered_json::array(
      {{{"role", "system"}, {"content", std::string(system)}},
       {{"role", "user"}, {"content", std::string(user)}}});
  return body.dump();
}

inline std::string Sha256Hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::kInvalidArgument, "SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

// Pulls the completion text out of a reply body. Accepts the common
// chat-completion shape as well as flat {"content"|"text"|"completion"}.
inline std::string ExtractCompletionText(std::string_view body) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error&) {
    throw Error(ErrorCode::kTransport, "reply is not JSON");
  }
  const nlohmann::json* text = nullptr;
  if (j.is_object()) {
    if (auto c = j.find("choices"); c != j.end() && c->is_array() && !c->empty()) {
      const auto& first = (*c)[0];
      if (auto m = first.find("message"); m != first.end() && m->contains("content")) {
        text = &(*m)["content"];
      } else if (auto t = first.find("text"); t != first.end()) {
        text = &*t;
      }
    }
    for (const char* key : {"content", "completion", "text", "response"}) {
      if (text != nullptr) break;
      if (auto it = j.find(key); it != j.end()) text = &*it;
    }
  }
  if (text == nullptr || !text->is_string()) {
    throw Error(ErrorCode::kTransport, "reply has no text completion field");
  }
  return text->get<std::string>();
}

class ChatTransport {
 public:
  virtual ~ChatTransport() = default;
  // Sends a serialized request body and returns the completion text.
  virtual std::string Complete(const std::string& request_body) = 0;
};

class HttpChatTransport : public ChatTransport {
 public:
  explicit HttpChatTransport(ModelServiceConfig config) : config_(std::move(config)) {
    config_.Validate();
    const auto scheme = config_.base_url.find("://");
    if (config_.base_url.empty() || scheme == std::string::npos) {
      throw Error(ErrorCode::kInvalidArgument,
                  "model URL must look like http(s)://host[:port]/path");
    }
    const auto slash = config_.base_url.find('/', scheme + 3);
    origin_ = config_.base_url.substr(0, slash);
    path_ = slash == std::string::npos ? "/" : config_.base_url.substr(slash);
  }

  std::string Complete(const std::string& request_body) override {
    httplib::Client cli(origin_);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
    const auto usecs =
        std::chrono::duration_cast<std::chrono::microseconds>(config_.timeout - secs);
    cli.set_connection_timeout(secs.count(), usecs.count());
    cli.set_read_timeout(secs.count(), usecs.count());
    cli.set_write_timeout(secs.count(), usecs.count());
    httplib::Headers headers;
    if (!config_.api_key.empty()) {
      headers.emplace("Authorization", "Bearer " + config_.api_key);
    }
    auto res = cli.Post(path_, headers, request_body, "application/json");
    if (!res) {
      const auto err = res.error();
      if (err == httplib::Error::ConnectionTimeout) {
        throw Error(ErrorCode::kTimeout, "model service timed out");
      }
      if (err == httplib::Error::Read) {
        throw Error(ErrorCode::kTimeout, "model service read failed or timed out");
      }
      throw Error(ErrorCode::kTransport, "model service unreachable: " + httplib::to_string(err));
    }
    if (res->status < 200 || res->status >= 300) {
      throw Error(ErrorCode::kTransport, "model service status " + std::to_string(res->status));
    }
    return ExtractCompletionText(res->body);
  }

 private:
  ModelServiceConfig config_;
  std::string origin_;
  std::string path_;
};

// Offline stand-in: looks up <dir>/<sha256(body)>.json and returns its
// "response" field.
class ReplayTransport : public ChatTransport {
 public:
  explicit ReplayTransport(std::filesystem::path dir) : dir_(std::move(dir)) {
    if (!std::filesystem::is_directory(dir_)) {
      throw Error(ErrorCode::kIo, "replay directory not found: " + dir_.string());
    }
  }

  std::string Complete(const std::string& request_body) override {
    const std::string key = Sha256Hex(request_body);
    const auto path = dir_ / (key + ".json");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::kTransport, "no replay entry for request " + key);
    nlohmann::json j;
    try {
      in >> j;
      return j.at("response").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kMalformed, "bad replay entry " + path.string() + ": " + e.what());
    }
  }

  // Writes one entry; used by fixture tooling and tests.
  static void Record(const std::filesystem::path& dir, const std::string& request_body,
                     const std::string& response) {
    std::filesystem::create_directories(dir);
    nlohmann::ordered_json j;
    j["request"] = nlohmann::json::parse(request_body);
    j["response"] = response;
    std::ofstream out(dir / (Sha256Hex(request_body) + ".json"), std::ios::binary);
    if (!out) throw Error(ErrorCode::kIo, "cannot write replay entry in " + dir.string());
    out << j.dump(2) << "\n";
  }

 private:
  std::filesystem::path dir_;
};

// Bounds concurrent transport calls and keeps the raw replies for auditing.
class ModelClient {
 public:
  ModelClient(ModelServiceConfig config, std::shared_ptr<ChatTransport> transport)
      : config_(std::move(config)), transport_(std::move(transport)) {
    config_.Validate();
    if (!transport_) throw Error(ErrorCode::kInvalidArgument, "no transport");
  }

  const ModelServiceConfig& config() const { return config_; }
  std::size_t peak_in_flight() const { return peak_.load(); }

  std::string Send(std::string_view system, std::string_view user) {
    const std::string body = BuildChatRequestBody(config_, system, user);
    Slot slot(*this);
    return transport_->Complete(body);
  }

  std::vector<std::string> ExtractTopics(const CourseDoc& course) {
    if (course.description.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "course " + course.id + " has no description");
    }
    return ParseTopicList(
        Send(kPreprocessSystemPrompt, PreprocessUserMessage(course.title, course.description)));
  }

  ClassifiedTopic ClassifyZeroShot(const std::string& text) {
    if (text.empty()) throw Error(ErrorCode::kInvalidArgument, "empty text");
    std::string reply = Send(kZeroShotSystemPrompt, ZeroShotUserMessage(text));
    ClassifiedTopic out;
    out.text = text;
    out.labels = ParseLabelReply(reply);
    out.backend = Backend::kRemote;
    out.raw_response = std::move(reply);
    return out;
  }

 private:
  class Slot {
   public:
    explicit Slot(ModelClient& c) : c_(c) {
      std::unique_lock lock(c_.mu_);
      c_.cv_.wait(lock, [&] { return c_.in_flight_ < c_.config_.max_in_flight; });
      ++c_.in_flight_;
      std::size_t peak = c_.peak_.load();
      while (c_.in_flight_ > peak && !c_.peak_.compare_exchange_weak(peak, c_.in_flight_)) {
      }
    }
    ~Slot() {
      {
        std::lock_guard lock(c_.mu_);
        --c_.in_flight_;
      }
      c_.cv_.notify_one();
    }
    Slot(const Slot&) = delete;
    Slot& operator=(const Slot&) = delete;

   private:
    ModelClient& c_;
  };

  ModelServiceConfig config_;
  std::shared_ptr<ChatTransport> transport_;
  std::mutex mu_;
  std::condition_variable cv_;
  std::size_t in_flight_ = 0;
  std::atomic<std::size_t> peak_{0};
};

// ---------------------------------------------------------------------------
// Batch classification.

struct BatchItemError {
  std::size_t index = 0;
  ErrorCode code = ErrorCode::kTransport;
  std::string message;
};

struct BatchResult {
  std::vector<std::optional<ClassifiedTopic>> items;
  std::vector<BatchItemError> errors;  // ascending index order
  bool ok() const { return errors.empty(); }
};

inline BatchResult ClassifyBatch(std::span<const std::string> texts, const BaselineModel& model) {
  BatchResult r;
  r.items.resize(texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) {
    r.items[i] = ClassifiedTopic{texts[i], ClassifyBaseline(model, texts[i]), Backend::kBaseline,
                                 std::nullopt};
  }
  return r;
}

inline BatchResult ClassifyBatch(std::span<const std::string> texts, ModelClient& client) {
  BatchResult r;
  r.items.resize(texts.size());
  if (texts.empty()) return r;
  std::vector<std::optional<BatchItemError>> errs(texts.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < texts.size(); i = next++) {
      try {
        r.items[i] = client.ClassifyZeroShot(texts[i]);
      } catch (const Error& e) {
        errs[i] = BatchItemError{i, e.code(), e.detail()};
      } catch (const std::exception& e) {
        errs[i] = BatchItemError{i, ErrorCode::kTransport, e.what()};
      }
    }
  };
  const std::size_t n_workers = std::min(client.config().max_in_flight, texts.size());
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < n_workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errs) {
    if (e) r.errors.push_back(std::move(*e));
  }
  return r;
}

}  // namespace currialign

#endif  // CURRIALIGN_MODEL_CLIENT_HPP_
