#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>

#include "splitweave/render.hpp"
#include "splitweave/samplers.hpp"

namespace splitweave {

struct ApiResponse {
  int status = 200;
  std::string body;  // JSON
};

inline constexpr std::size_t kMaxRequestBytes = 256 * 1024;

/// Stateless request handler behind the HTTP server. Routes live under
/// /api/v1/ with /api/ accepted as an alias.
class Api {
 public:
  explicit Api(MotifRegistry motifs, SamplerConfig cfg = default_sampler_config(),
               std::chrono::milliseconds render_budget = std::chrono::seconds(5));

  ApiResponse handle(std::string_view method, std::string_view path, std::string_view body) const;

  const MotifRegistry& motifs() const { return motifs_; }

 private:
  MotifRegistry motifs_;
  SamplerConfig cfg_;
  std::chrono::milliseconds budget_;
};

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8787;  // 0 picks a free port
  std::filesystem::path static_dir;
};

class HttpServer {
 public:
  HttpServer(const Api& api, ServerOptions opts);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds the listening socket; returns the bound port. Throws Error(io).
  int bind();
  // Serves until stop() is called.
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace splitweave
