#include "splitweave/server.hpp"

#include <algorithm>

#include <httplib.h>

#include <json.hpp>

#include "splitweave/edits.hpp"
#include "splitweave/parser.hpp"

namespace splitweave {

namespace {

using nlohmann::json;

struct ApiFailure {
  int status;
  json body;
};

json span_json(const SourceSpan& s) {
  return {{"startLine", s.start_line}, {"startCol", s.start_col}, {"endLine", s.end_line}, {"endCol", s.end_col}};
}

json diagnostics_json(const std::vector<Diagnostic>& diags) {
  json out = json::array();
  for (const Diagnostic& d : diags) out.push_back({{"nodePath", d.path}, {"message", d.message}});
  return out;
}

ApiFailure failure(int status, std::string_view code, const std::string& detail) {
  return {status, {{"error", {{"code", code}, {"detail", detail}}}}};
}

// Maps library errors onto the closed API error set.
ApiFailure from_error(const Error& e) {
  if (const auto* pe = dynamic_cast<const ParseError*>(&e)) {
    ApiFailure f = failure(400, "PARSE_ERROR", pe->what());
    f.body["error"]["span"] = span_json(pe->span());
    return f;
  }
  if (const auto* se = dynamic_cast<const SemanticError*>(&e)) {
    ApiFailure f = failure(400, "SEMANTIC_ERROR", se->what());
    f.body["error"]["diagnostics"] = diagnostics_json(se->diagnostics());
    if (!se->diagnostics().empty()) f.body["error"]["nodePath"] = se->diagnostics().front().path;
    return f;
  }
  ApiFailure f;
  switch (e.code()) {
    case ErrorCode::incompatible_edit:
    case ErrorCode::invalid_result: f = failure(409, "INCOMPATIBLE_EDIT", e.what()); break;
    case ErrorCode::budget_exceeded:
    case ErrorCode::degenerate_sites:
    case ErrorCode::unsupported_topology:
    case ErrorCode::unknown_motif: f = failure(422, "INTERNAL", e.what()); break;
    default: f = failure(500, "INTERNAL", e.what()); break;
  }
  if (!e.node_path().empty()) f.body["error"]["nodePath"] = e.node_path();
  return f;
}

class Request {
 public:
  explicit Request(std::string_view body) {
    try {
      doc_ = json::parse(body);
    } catch (const json::exception&) {
      throw failure(400, "PARSE_ERROR", "request body is not valid JSON");
    }
    if (!doc_.is_object()) throw failure(400, "PARSE_ERROR", "request body must be a JSON object");
  }

  std::string text(const char* field) const {
    auto it = doc_.find(field);
    if (it == doc_.end() || !it->is_string())
      throw failure(400, "PARSE_ERROR", std::string("field '") + field + "' must be a string");
    return it->get<std::string>();
  }

  Seed seed() const {
    auto it = doc_.find("seed");
    if (it == doc_.end()) return 0;
    if (!it->is_number_integer()) throw failure(400, "PARSE_ERROR", "field 'seed' must be an integer");
    if (it->is_number_unsigned()) return it->get<Seed>();
    auto v = it->get<std::int64_t>();
    if (v < 0) throw failure(400, "PARSE_ERROR", "field 'seed' must be non-negative");
    return static_cast<Seed>(v);
  }

 private:
  json doc_;
};

}  // namespace

Api::Api(MotifRegistry motifs, SamplerConfig cfg, std::chrono::milliseconds render_budget)
    : motifs_(std::move(motifs)), cfg_(std::move(cfg)), budget_(render_budget) {}

ApiResponse Api::handle(std::string_view method, std::string_view path, std::string_view body) const {
  std::string_view route = path;
  if (route.starts_with("/api/v1/")) {
    route.remove_prefix(8);
  } else if (route.starts_with("/api/")) {
    route.remove_prefix(5);
  } else {
    return {404, failure(404, "INTERNAL", "no such endpoint").body.dump()};
  }
  if (body.size() > kMaxRequestBytes)
    return {413, failure(413, "PARSE_ERROR", "request body exceeds 256 KiB").body.dump()};

  auto deadline = [&] { return std::chrono::steady_clock::now() + budget_; };
  static constexpr std::string_view kRoutes[] = {"motifs", "render", "sample", "edit", "quartet/preview"};
  if (std::find(std::begin(kRoutes), std::end(kRoutes), route) == std::end(kRoutes))
    return {404, failure(404, "INTERNAL", "no such endpoint").body.dump()};
  try {
    if (route == "motifs") {
      if (method != "GET") throw failure(405, "INTERNAL", "use GET");
      json list = json::array();
      for (const MotifDef& m : motifs_.all())
        list.push_back({{"id", m.id}, {"source", m.source == MotifSource::builtin ? "builtin" : "userFile"}});
      return {200, json{{"motifs", list}}.dump()};
    }
    if (method != "POST") throw failure(405, "INTERNAL", "use POST");
    Request req(body);

    if (route == "render") {
      Program p = parse(req.text("program"));
      RenderOptions opts;
      opts.deadline = deadline();
      SceneGraph scene = interpret(p, req.seed(), motifs_, opts.deadline);
      return {200, json{{"svg", emit_svg(scene, opts)}, {"diagnostics", diagnostics_json(scene.warnings)}}.dump()};
    }
    if (route == "sample") {
      std::string style = req.text("style");
      auto tag = parse_style_tag(style);
      if (!tag || *tag == StyleTag::custom) throw failure(400, "SEMANTIC_ERROR", "unknown style '" + style + "'");
      return {200, json{{"program", print(sample_program(*tag, req.seed(), motifs_, cfg_))}}.dump()};
    }
    if (route == "edit") {
      Program p = parse(req.text("program"));
      EditDescriptor e = parse_edit(req.text("edit"));
      return {200, json{{"program", print(apply_edit(p, e))}}.dump()};
    }
    if (route == "quartet/preview") {
      Program a = parse(req.text("progA"));
      EditDescriptor e = parse_edit(req.text("edit"));
      Program b = parse(req.text("progB"));
      for (auto [name, prog] : {std::pair{"a", &a}, {"b", &b}}) {
        try {
          apply_edit(*prog, e);
        } catch (const Error& err) {
          ApiFailure f = failure(409, "INCOMPATIBLE_EDIT", name);
          f.body["error"]["reason"] = err.what();
          throw f;
        }
      }
      Seed seed = req.seed();
      RenderOptions opts;
      opts.deadline = deadline();
      auto svg = [&](const Program& p) { return emit_svg(interpret(p, seed, motifs_, opts.deadline), opts); };
      return {200, json{{"a", svg(a)}, {"aPrime", svg(apply_edit(a, e))}, {"b", svg(b)}, {"bPrime", svg(apply_edit(b, e))}}
                       .dump()};
    }
    throw failure(404, "INTERNAL", "no such endpoint");
  } catch (const ApiFailure& f) {
    return {f.status, f.body.dump()};
  } catch (const Error& e) {
    ApiFailure f = from_error(e);
    return {f.status, f.body.dump()};
  } catch (const std::exception& e) {
    return {500, failure(500, "INTERNAL", e.what()).body.dump()};
  }
}

// ---------------------------------------------------------------------------
// HTTP binding.

struct HttpServer::Impl {
  const Api& api;
  ServerOptions opts;
  httplib::Server server;

  Impl(const Api& a, ServerOptions o) : api(a), opts(std::move(o)) {}
};

HttpServer::HttpServer(const Api& api, ServerOptions opts) : impl_(std::make_unique<Impl>(api, std::move(opts))) {
  auto& svr = impl_->server;
  svr.set_payload_max_length(kMaxRequestBytes);
  auto forward = [this](const httplib::Request& req, httplib::Response& res) {
    ApiResponse r = impl_->api.handle(req.method, req.path, req.body);
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };
  svr.Get(R"(/api/.*)", forward);
  svr.Post(R"(/api/.*)", forward);
  if (!impl_->opts.static_dir.empty() && !svr.set_mount_point("/", impl_->opts.static_dir.string()))
    throw Error(ErrorCode::io, "static asset directory not found: " + impl_->opts.static_dir.string());
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind() {
  auto& svr = impl_->server;
  int port = impl_->opts.port;
  if (port == 0) {
    port = svr.bind_to_any_port(impl_->opts.host);
    if (port < 0) throw Error(ErrorCode::io, "cannot bind " + impl_->opts.host);
  } else if (!svr.bind_to_port(impl_->opts.host, port)) {
    throw Error(ErrorCode::io, "cannot bind " + impl_->opts.host + ":" + std::to_string(port));
  }
  return port;
}

void HttpServer::run() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace splitweave
