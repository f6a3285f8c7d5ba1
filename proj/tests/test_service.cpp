#include <chrono>
#include <set>
#include <thread>

#include "doctest.h"
#include "generators.hpp"
#include "httplib.h"
#include "json.hpp"
#include "nmtdebug/errors.hpp"
#include "nmtdebug/service.hpp"

using namespace nmtdebug;
using json = nlohmann::json;

namespace {

json body(const HttpResponse &r) { return json::parse(r.body); }

ScoredDataset sample(std::uint64_t seed, std::size_t n, const std::string &name = "sys") {
  gen::Rng rng(seed);
  return score_dataset(gen::dataset(rng, n, name));
}

ScoredDataset with_all_references(std::uint64_t seed, std::size_t n) {
  gen::Rng rng(seed);
  auto d = gen::dataset(rng, n, "refs");
  for (auto &r : d.records)
    if (!r.ref_text) r.ref_text = r.hypothesis_text();
  return score_dataset(d);
}

}  // namespace

TEST_CASE("meta") {
  const InspectionService svc(sample(71, 12));
  const auto m = body(svc.meta());
  CHECK(m["count"] == 12);
  CHECK(m["comparison"] == false);
  CHECK(m["systems"] == json::array({"sys"}));
  CHECK(m["bleu_sort_available"] == false);
  CHECK(m["format_version"] == "v1");

  const InspectionService refs(with_all_references(72, 5));
  CHECK(body(refs.meta())["bleu_sort_available"] == true);
}

TEST_CASE("records pages partition the sorted order") {
  const auto scored = sample(73, 137);
  const InspectionService svc(scored);
  for (const char *field : {"confidence", "cdp", "ap_in", "ap_out", "overlap"}) {
    for (const char *dir : {"asc", "desc"}) {
      const auto order = sort_indices(scored, {*parse_sort_field(field), *parse_sort_direction(dir)});
      std::vector<std::size_t> seen;
      for (std::size_t offset = 0; offset < 150; offset += 25) {
        const auto page = body(svc.records(
            {{"offset", std::to_string(offset)}, {"limit", "25"}, {"sort", field}, {"dir", dir}}));
        CHECK(page["total"] == 137);
        for (const auto &r : page["records"]) seen.push_back(r["position"].get<std::size_t>());
      }
      CHECK(seen == order);
    }
  }
}

TEST_CASE("records parameter validation") {
  const InspectionService svc(sample(74, 10));
  CHECK(svc.records({{"limit", "0"}}).status == 400);
  CHECK(svc.records({{"limit", "501"}}).status == 400);
  CHECK(svc.records({{"limit", "500"}}).status == 200);
  CHECK(svc.records({{"offset", "-1"}}).status == 400);
  CHECK(svc.records({{"sort", "fluency"}}).status == 400);
  CHECK(svc.records({{"dir", "up"}}).status == 400);
  CHECK(svc.records({{"system", "b"}}).status == 409);
  const auto bleu = svc.records({{"sort", "bleu"}});
  CHECK(bleu.status == 400);
  CHECK(body(bleu)["error"]["code"] == "bleu_unavailable");
  // past-the-end pages are empty, not errors
  CHECK(body(svc.records({{"offset", "1000"}}))["records"].empty());
}

TEST_CASE("record detail") {
  const auto scored = sample(75, 30);
  const InspectionService svc(scored);
  for (std::size_t pos = 0; pos < scored.size(); ++pos) {
    const auto &rec = scored.dataset.records[pos];
    const auto resp = svc.record(rec.id, {});
    REQUIRE(resp.status == 200);
    const auto d = body(resp);
    CHECK(d["src_tokens"] == rec.src_tokens);
    CHECK(d["attention"].size() == rec.hypothesis_length());
    CHECK(d["scores"]["confidence"].get<double>() == scored.scores[pos].confidence);
    const bool underline = scored.scores[pos].overlap_percent() > kUnderlineOverlapPercent;
    CHECK(d.contains("match") == underline);
    if (underline) CHECK(d["match"]["length"].get<std::size_t>() > 0);
    // identical requests give identical bytes
    CHECK(svc.record(rec.id, {}).body == resp.body);
  }
  const auto missing = svc.record("no-such-id", {});
  CHECK(missing.status == 404);
  CHECK(body(missing)["error"]["code"] == "not_found");
  CHECK(svc.handle("/api/nothing", {}).status == 404);
}

TEST_CASE("comparison mode") {
  const auto a = sample(76, 8, "A");
  auto b_data = a.dataset;
  b_data.system_name = "B";
  for (auto &r : b_data.records) r.hyp_tokens[0] = "changed";
  const auto b = score_dataset(b_data);
  const InspectionService svc(a, b);
  CHECK(body(svc.meta())["comparison"] == true);
  const auto c = body(svc.compare(a.dataset.records[3].id));
  CHECK(c["a"]["system"] == "A");
  CHECK(c["b"]["system"] == "B");
  CHECK(c["b"]["hyp_tokens"][0] == "changed");
  CHECK(svc.records({{"system", "b"}}).status == 200);
  CHECK(svc.compare("missing").status == 404);

  const InspectionService single(a);
  CHECK(single.compare(a.dataset.records[0].id).status == 409);

  auto mismatched = a.dataset;
  mismatched.records[2].src_tokens[0] = "other";
  CHECK_THROWS_AS(InspectionService(a, score_dataset(mismatched)), PairingError);
}

TEST_CASE("http host serves the api and a page at /") {
  const InspectionService svc(sample(77, 20));
  ServerOptions opts;
  opts.port = 0;
  ServiceHost host(svc, opts);
  const int port = host.bind();
  REQUIRE(port > 0);
  std::thread server([&] { host.listen(); });

  httplib::Client client("127.0.0.1", port);
  httplib::Result meta;
  for (int attempt = 0; attempt < 100 && !meta; ++attempt) {
    meta = client.Get("/api/meta");
    if (!meta) std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
  REQUIRE(meta);
  CHECK(meta->status == 200);
  CHECK(json::parse(meta->body)["count"] == 20);

  const auto page = client.Get("/api/records?offset=5&limit=3&sort=cdp&dir=desc");
  REQUIRE(page);
  CHECK(page->body == svc.records({{"offset", "5"}, {"limit", "3"}, {"sort", "cdp"}, {"dir", "desc"}}).body);

  const auto missing = client.Get("/api/record/nope");
  REQUIRE(missing);
  CHECK(missing->status == 404);

  const auto root = client.Get("/");
  REQUIRE(root);
  CHECK(root->status == 200);
  CHECK(root->get_header_value("Content-Type").find("text/html") != std::string::npos);

  // a second host on the same port fails to bind
  ServerOptions same = opts;
  same.port = port;
  ServiceHost clash(svc, same);
  CHECK(clash.bind() == -1);

  host.stop();
  server.join();
}
