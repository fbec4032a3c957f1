#include "pes/pes.h"

#include <cstring>
#include <new>
#include <string>

#include "pes/benchgen.hpp"
#include "pes/checker.hpp"
#include "pes/error.hpp"
#include "pes/parser.hpp"
#include "pes/region_oracle.hpp"

struct pes_file {
  pes::PesFile ast;
};

namespace {

thread_local std::string last_error;

pes_status status_of(pes::ErrorKind k) {
  switch (k) {
  case pes::ErrorKind::lex: return PES_ERR_LEX;
  case pes::ErrorKind::syntax: return PES_ERR_SYNTAX;
  case pes::ErrorKind::unresolved: return PES_ERR_UNRESOLVED;
  case pes::ErrorKind::duplicate: return PES_ERR_DUPLICATE;
  case pes::ErrorKind::validation: return PES_ERR_VALIDATION;
  case pes::ErrorKind::config: return PES_ERR_CONFIG;
  case pes::ErrorKind::resource: return PES_ERR_RESOURCE;
  case pes::ErrorKind::oracle_limit: return PES_ERR_ORACLE_LIMIT;
  }
  return PES_ERR_INTERNAL;
}

pes_status fail(pes_status s, std::string msg) {
  last_error = std::move(msg);
  return s;
}

template <class F>
pes_status guarded(F&& f) {
  try {
    last_error.clear();
    return f();
  } catch (const pes::Error& e) {
    return fail(status_of(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(PES_ERR_RESOURCE, "out of memory");
  } catch (const std::exception& e) {
    return fail(PES_ERR_INTERNAL, e.what());
  }
}

pes::Params to_params(const pes_param* params, std::size_t count) {
  pes::Params out;
  for (std::size_t k = 0; k < count; ++k) {
    if (!params[k].name)
      throw pes::Error(pes::ErrorKind::config, "parameter without a name");
    out[params[k].name] = params[k].value;
  }
  return out;
}

char* dup(const std::string& s) {
  char* p = new char[s.size() + 1];
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void fill(pes_stats* out, const pes::Stats& s) {
  if (!out)
    return;
  out->nodes_expanded = s.nodes_expanded;
  out->zones_created = s.zones_created;
  out->peak_zones = s.peak_zones;
  out->universe_zones = s.universe_zones;
  out->locations = s.locations;
  out->iterations = s.iterations;
  out->milliseconds = s.milliseconds;
}

pes::Family family_of(const char* s) {
  auto f = s ? pes::parse_family(s) : std::nullopt;
  if (!f)
    throw pes::Error(pes::ErrorKind::config, std::string("unknown family '") + (s ? s : "") + "'");
  return *f;
}

pes::Category category_of(const char* s) {
  auto c = s ? pes::parse_category(s) : std::nullopt;
  if (!c)
    throw pes::Error(pes::ErrorKind::config, std::string("unknown category '") + (s ? s : "") + "'");
  return *c;
}

} // namespace

extern "C" {

const char* pes_version(void) { return "1.0.0"; }

const char* pes_status_name(pes_status status) {
  switch (status) {
  case PES_OK: return "ok";
  case PES_ERR_LEX: return "lex";
  case PES_ERR_SYNTAX: return "syntax";
  case PES_ERR_UNRESOLVED: return "unresolved";
  case PES_ERR_DUPLICATE: return "duplicate";
  case PES_ERR_VALIDATION: return "validation";
  case PES_ERR_CONFIG: return "config";
  case PES_ERR_RESOURCE: return "resource";
  case PES_ERR_ORACLE_LIMIT: return "oracle_limit";
  case PES_ERR_INVALID_ARGUMENT: return "invalid_argument";
  case PES_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* pes_last_error(void) { return last_error.c_str(); }

void pes_string_free(char* s) { delete[] s; }

pes_status pes_parse(const char* source, const pes_param* params, size_t param_count,
                     pes_file** out) {
  if (!source || !out || (param_count && !params))
    return fail(PES_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto f = new pes_file{pes::parse_pes(source, to_params(params, param_count))};
    *out = f;
    return PES_OK;
  });
}

void pes_file_destroy(pes_file* file) { delete file; }

pes_status pes_print(const pes_file* file, char** out) {
  if (!file || !out)
    return fail(PES_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = dup(pes::pretty_print(file->ast));
    return PES_OK;
  });
}

pes_status pes_check(const pes_file* file, const pes_check_options* options, int* satisfied,
                     pes_stats* stats) {
  if (!file || !satisfied)
    return fail(PES_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    pes::CheckOptions opts;
    if (options && options->max_zones)
      opts.max_zones = options->max_zones;
    pes::Verdict v = pes::check(file->ast, opts);
    *satisfied = v.satisfied ? 1 : 0;
    fill(stats, v.stats);
    return PES_OK;
  });
}

pes_status pes_oracle_check(const pes_file* file, int* satisfied, pes_stats* stats) {
  if (!file || !satisfied)
    return fail(PES_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    pes::Verdict v = pes::region_oracle_check(file->ast);
    *satisfied = v.satisfied ? 1 : 0;
    fill(stats, v.stats);
    return PES_OK;
  });
}

pes_status pes_generate(const char* family, int n, const char* category, const pes_param* params,
                        size_t param_count, char** out) {
  if (!out || (param_count && !params))
    return fail(PES_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    pes::BenchSpec spec{family_of(family), n, category_of(category), to_params(params, param_count)};
    *out = dup(pes::generate(spec));
    return PES_OK;
  });
}

pes_status pes_expected_verdict(const char* family, int n, const char* category, int* known,
                                int* valid) {
  if (!known || !valid)
    return fail(PES_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    auto v = pes::expected_verdict(family_of(family), n, category_of(category));
    *known = v.has_value() ? 1 : 0;
    *valid = v.value_or(false) ? 1 : 0;
    return PES_OK;
  });
}

size_t pes_acceptance_cell_count(void) { return pes::acceptance_cells().size(); }

pes_status pes_acceptance_cell(size_t index, pes_cell* out) {
  if (!out)
    return fail(PES_ERR_INVALID_ARGUMENT, "null argument");
  const auto& cells = pes::acceptance_cells();
  if (index >= cells.size())
    return fail(PES_ERR_INVALID_ARGUMENT, "cell index out of range");
  const auto& c = cells[index];
  out->family = pes::to_string(c.family);
  out->n = c.n;
  out->category = pes::to_string(c.category);
  out->expected_valid = c.expected_valid ? 1 : 0;
  return PES_OK;
}

} // extern "C"
