#include "manna/app/service.hpp"

#include "manna/app/commands.hpp"
#include "manna/io/demos.hpp"

namespace manna::app {
namespace {

constexpr const char* kApi = "/api/";
constexpr const char* kDemos = "/api/demos";

HttpReply reply(int status, const json& body) { return {status, serialize(body)}; }

HttpReply error(int status, const std::string& type, const std::string& message) {
  return reply(status, {{"error", {{"type", type}, {"message", message}}}});
}

template <class T>
T option_value(const json& options, const char* key, const char* kind) {
  try {
    return options.at(key).get<T>();
  } catch (const json::exception&) {
    throw io::SchemaError(std::string("/options/") + key, std::string("expected ") + kind);
  }
}

CommandOptions parse_options(const json& doc) {
  CommandOptions opt;
  auto it = doc.find("options");
  if (it == doc.end()) return opt;
  const json& o = *it;
  if (!o.is_object()) throw io::SchemaError("/options", "expected an object");
  if (o.contains("exact")) opt.exact = option_value<bool>(o, "exact", "a boolean");
  if (o.contains("tol")) {
    opt.tol = option_value<double>(o, "tol", "a number");
    if (!(*opt.tol > 0)) throw io::SchemaError("/options/tol", "expected a positive number");
  }
  if (o.contains("seed")) opt.seed = option_value<std::uint64_t>(o, "seed", "a nonnegative integer");
  if (o.contains("trials")) {
    opt.trials = option_value<std::size_t>(o, "trials", "a nonnegative integer");
    if (opt.trials > 50) throw io::SchemaError("/options/trials", "at most 50 trials per request");
  }
  if (o.contains("grid")) {
    opt.grid = option_value<std::size_t>(o, "grid", "an integer in [2, 400]");
    if (*opt.grid < 2 || *opt.grid > 400) throw io::SchemaError("/options/grid", "expected an integer in [2, 400]");
  }
  return opt;
}

HttpReply post(const std::string& name, const std::string& body, const ServiceOptions& service) {
  Command command;
  try {
    command = parse_command(name);
  } catch (const InputError&) {
    return error(404, "route", "no route POST /api/" + name);
  }
  const CancelToken token(service.budget);
  const CommandResult r = guarded([&] {
    json doc;
    try {
      doc = json::parse(body);
    } catch (const json::parse_error& e) {
      throw io::SchemaError("", std::string("invalid JSON: ") + e.what());
    }
    CommandOptions opt = parse_options(doc);
    opt.cancel = &token;
    return run_command(command, doc, opt);
  });
  return reply(r.status, r.body);
}

HttpReply get(const std::string& path) {
  if (path == "/healthz") return reply(200, {{"status", "ok"}});
  if (path == kDemos) return reply(200, io::demo_catalog());
  const std::string prefix = std::string(kDemos) + "/";
  if (path.rfind(prefix, 0) == 0) {
    const std::string name = path.substr(prefix.size());
    const auto names = io::demo_names();
    if (std::find(names.begin(), names.end(), name) == names.end())
      return error(404, "route", "unknown demo '" + name + "'");
    const CommandResult r = guarded([&] { return io::to_json(io::run_demo(name)); });
    return reply(r.status, r.body);
  }
  return error(404, "route", "no route GET " + path);
}

}  // namespace

HttpReply handle_request(const std::string& method, const std::string& target, const std::string& body,
                         const ServiceOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const std::string path = target.substr(0, target.find('?'));
  HttpReply out;
  if (body.size() > options.max_body) {
    out = error(413, "limit", "request body exceeds " + std::to_string(options.max_body) + " bytes");
  } else if (method == "GET") {
    out = get(path);
  } else if (method == "POST" && path.rfind(kApi, 0) == 0) {
    out = post(path.substr(std::string(kApi).size()), body, options);
  } else {
    out = error(405, "route", "method " + method + " not allowed on " + path);
  }
  out.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace manna::app
