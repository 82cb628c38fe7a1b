#include <catch2/catch_amalgamated.hpp>

#include "tempora/bench.hpp"

using namespace tempora;

namespace {

DialogueSession fig_session() {
  DialogueSession s;
  s.session_id = "s2";
  s.timestamp = CalDate{2020, 3, 16};
  s.turns = {{"Sharon", "My survival course started on 12 March 2020."},
             {"Emma", "I went hiking the other day."}};
  return s;
}

const SanityWindow kWindow =
    SanityWindow::around(CalDate{2020, 1, 1}, CalDate{2020, 12, 31});

ScriptedBackend fixed(const std::string& reply) {
  return ScriptedBackend([reply](const ChatRequest&) { return reply; });
}

}  // namespace

TEST_CASE("extract_events parses the three-field lines") {
  auto backend = fixed(
      "Sharon's survival course started | last Thursday | 2020-03-12\n"
      "Emma went hiking | the other day | UNKNOWN\n"
      "Sharon finished the course | NONE | 2020-03-19\n");
  auto result = extract_events(fig_session(), backend, kWindow, 1);
  CHECK(result.dropped_lines == 0);
  REQUIRE(result.events.size() == 3);
  const auto& course = result.events[0];
  CHECK(course.event_id == 1);
  CHECK(course.session_id == "s2");
  REQUIRE(course.relative_expression.has_value());
  CHECK(*course.relative_expression == "last Thursday");
  REQUIRE(course.inferred_date.has_value());
  CHECK(*course.inferred_date == CalDate{2020, 3, 12});
  // ambiguous expression: date stays unknown, expression retained
  CHECK_FALSE(result.events[1].inferred_date.has_value());
  REQUIRE(result.events[1].relative_expression.has_value());
  // absolute mention: no relative expression
  CHECK_FALSE(result.events[2].relative_expression.has_value());
}

TEST_CASE("extract_events: small talk yields nothing") {
  auto backend = fixed("\n");
  auto result = extract_events(fig_session(), backend, kWindow, 1);
  CHECK(result.events.empty());
  CHECK(result.dropped_lines == 0);
}

TEST_CASE("extract_events drops malformed lines and counts them") {
  auto backend = fixed(
      "only two | fields\n"
      "a fine event | NONE | 2020-05-01\n"
      "bad date | NONE | 2020-13-77\n"
      "not even close\n");
  auto result = extract_events(fig_session(), backend, kWindow, 1);
  CHECK(result.dropped_lines == 3);
  REQUIRE(result.events.size() == 1);
  CHECK(result.events[0].description == "a fine event");
}

TEST_CASE("extract_events demotes out-of-window dates to unknown") {
  auto backend = fixed("ancient ritual | NONE | 1008-01-01\n");
  auto result = extract_events(fig_session(), backend, kWindow, 1);
  REQUIRE(result.events.size() == 1);
  CHECK_FALSE(result.events[0].inferred_date.has_value());
}

namespace {

std::vector<TemporalEvent> linked_events() {
  return {
      TemporalEvent{1, "s1", "Debra told her mentor about her business idea",
                    std::nullopt, CalDate{2023, 5, 8}},
      TemporalEvent{2, "s1", "Debra adopted a cat", std::nullopt,
                    CalDate{2023, 5, 8}},
      TemporalEvent{3, "s2", "Debra started her own business", std::nullopt,
                    CalDate{2023, 5, 21}},
      TemporalEvent{4, "s2", "Debra hired her first employee", std::nullopt,
                    CalDate{2023, 5, 22}},
  };
}

}  // namespace

TEST_CASE("link_events groups cross-session events") {
  auto backend = fixed("GROUP: 1,3 | Debra's business\n");
  auto groups = link_events(linked_events(), backend);
  REQUIRE(groups.size() == 1);
  CHECK(groups[0].member_event_ids == std::vector<int>{1, 3});
  CHECK(groups[0].shared_entity == "Debra's business");
}

TEST_CASE("link_events discards invalid groups") {
  // same-session only, unknown id, and a single-member group
  auto backend = fixed(
      "GROUP: 3,4 | both from s2\n"
      "GROUP: 1,99 | unknown member\n"
      "GROUP: 2 | singleton\n"
      "chatter that is not a group line\n"
      "GROUP: 2,4 | cat vs employee\n");
  auto groups = link_events(linked_events(), backend);
  REQUIRE(groups.size() == 1);
  CHECK(groups[0].member_event_ids == std::vector<int>{2, 4});
}

TEST_CASE("link_events: nothing related gives an empty list") {
  auto backend = fixed("no groups found\n");
  CHECK(link_events(linked_events(), backend).empty());
}

TEST_CASE("link_events needs two sessions of events") {
  std::vector<TemporalEvent> one_session = {
      TemporalEvent{1, "s1", "a", std::nullopt, std::nullopt},
      TemporalEvent{2, "s1", "b", std::nullopt, std::nullopt}};
  auto backend = fixed("GROUP: 1,2 | x\n");
  CHECK_THROWS_AS(link_events(one_session, backend), DataError);
}

namespace {

// material pools big enough for the published distribution
std::vector<TemporalEvent> big_event_pool() {
  std::vector<TemporalEvent> events;
  for (int i = 1; i <= 300; ++i) {
    TemporalEvent e;
    e.event_id = i;
    e.session_id = i % 2 == 0 ? "s2" : "s1";
    e.description = "event " + std::to_string(i);
    e.relative_expression = "last week";
    e.inferred_date = add_days(CalDate{2023, 1, 1}, i % 200);
    events.push_back(e);
  }
  return events;
}

std::vector<EventGroup> big_group_pool() {
  EventGroup g;
  g.group_id = 1;
  g.shared_entity = "everything";
  for (int i = 1; i <= 80; ++i) g.member_event_ids.push_back(i);
  return {g};
}

ScriptedBackend creation_backend() {
  return ScriptedBackend([](const ChatRequest& req) {
    REQUIRE(req.role == Role::create);
    const std::string& task = req.messages[1].text;
    const bool unanswerable = task.find("must NOT be answerable") != std::string::npos;
    const bool tp = task.find("Precedence") != std::string::npos;
    if (tp) {
      return std::string("Which came first? | the first event | the second event "
                         "| Unanswerable | ") +
             (unanswerable ? "C" : "A");
    }
    return std::string("When (or how long)? | 2023-02-01 | 2023-03-01 | 14 days "
                       "| 2 months | Unanswerable | ") +
           (unanswerable ? "E" : "A");
  });
}

}  // namespace

TEST_CASE("create_qas reproduces the published distribution at scale") {
  auto backend = creation_backend();
  BenchTargets targets;
  targets.ta = 264;
  targets.tp = 102;
  targets.ti = 234;
  targets.unanswerable_fraction = 112.0 / 600.0;
  auto drafts = create_qas(big_event_pool(), big_group_pool(), backend, targets,
                           /*seed=*/7);
  REQUIRE(drafts.size() == 600);
  int ta = 0, tp = 0, ti = 0, unans = 0;
  for (const auto& d : drafts) {
    switch (d.question.qtype) {
      case QType::TA: ++ta; break;
      case QType::TP: ++tp; break;
      case QType::TI: ++ti; break;
    }
    unans += d.question.gold_unanswerable;
    // option-count and provenance rules hold for every draft
    CHECK(d.question.options.size() ==
          static_cast<size_t>(options_for(d.question.qtype)));
    if (d.question.qtype == QType::TA) {
      CHECK(d.provenance.size() == 1);
    } else {
      CHECK(d.provenance.size() == 2);
    }
    CHECK(d.review == ReviewState::pending);
  }
  CHECK(ta == 264);
  CHECK(tp == 102);
  CHECK(ti == 234);
  CHECK(unans == 112);
}

TEST_CASE("create_qas is deterministic for a fixed seed") {
  BenchTargets targets;
  targets.ta = 5;
  targets.tp = 2;
  targets.ti = 2;
  auto b1 = creation_backend();
  auto b2 = creation_backend();
  auto d1 = create_qas(big_event_pool(), big_group_pool(), b1, targets, 42);
  auto d2 = create_qas(big_event_pool(), big_group_pool(), b2, targets, 42);
  REQUIRE(d1.size() == d2.size());
  for (size_t i = 0; i < d1.size(); ++i) {
    CHECK(to_json(d1[i]).dump() == to_json(d2[i]).dump());
  }
}

TEST_CASE("create_qas: no groups but a TP target -> InsufficientMaterial") {
  auto backend = creation_backend();
  BenchTargets targets;
  targets.tp = 1;
  CHECK_THROWS_AS(create_qas(big_event_pool(), {}, backend, targets),
                  InsufficientMaterialError);
}

TEST_CASE("create_qas: malformed replies consume material until it runs out") {
  int calls = 0;
  ScriptedBackend backend([&calls](const ChatRequest&) {
    ++calls;
    return std::string("not | enough | fields");
  });
  auto pool = big_event_pool();
  std::vector<TemporalEvent> events(pool.begin(), pool.begin() + 3);
  BenchTargets targets;
  targets.ta = 2;
  CHECK_THROWS_AS(create_qas(events, {}, backend, targets),
                  InsufficientMaterialError);
  CHECK(calls == 3);  // every candidate tried once
}

TEST_CASE("review export/import round trip") {
  auto backend = creation_backend();
  BenchTargets targets;
  targets.ta = 3;
  targets.tp = 1;
  targets.ti = 1;
  auto drafts = create_qas(big_event_pool(), big_group_pool(), backend, targets, 1);
  REQUIRE(drafts.size() == 5);

  SECTION("all accepted: identity on accepted content") {
    for (auto& d : drafts) d.review = ReviewState::accepted;
    ReviewImport imported = import_review(export_review(drafts));
    REQUIRE(imported.accepted.size() == drafts.size());
    for (size_t i = 0; i < drafts.size(); ++i) {
      CHECK(to_json(imported.accepted[i]).dump() ==
            to_json(drafts[i].question).dump());
    }
    CHECK(imported.rejected_ids.empty());
  }

  SECTION("one rejection shrinks the benchmark by one") {
    for (auto& d : drafts) d.review = ReviewState::accepted;
    drafts[2].review = ReviewState::rejected;
    ReviewImport imported = import_review(export_review(drafts));
    CHECK(imported.accepted.size() == drafts.size() - 1);
    REQUIRE(imported.rejected_ids.size() == 1);
    CHECK(imported.rejected_ids[0] == drafts[2].question.question_id);
  }

  SECTION("pending drafts stay out of the benchmark") {
    ReviewImport imported = import_review(export_review(drafts));
    CHECK(imported.accepted.empty());
    CHECK(imported.pending == static_cast<int>(drafts.size()));
  }

  SECTION("revision replaces fields") {
    drafts[0].review = ReviewState::revised;
    nlohmann::json line = to_json(drafts[0]);
    line["revised"] = {{"text", "Exactly when did event 1 happen?"}, {"gold", 1}};
    ReviewImport imported = import_review(line.dump() + "\n");
    REQUIRE(imported.accepted.size() == 1);
    CHECK(imported.accepted[0].text == "Exactly when did event 1 happen?");
    CHECK(imported.accepted[0].gold == 1);
  }

  SECTION("revised gold out of range is a FormatError") {
    drafts[0].review = ReviewState::revised;
    nlohmann::json line = to_json(drafts[0]);
    line["revised"] = {{"gold", 9}};
    CHECK_THROWS_AS(import_review(line.dump() + "\n"), FormatError);
  }

  SECTION("malformed review line is a FormatError") {
    CHECK_THROWS_AS(import_review("{not json\n"), FormatError);
  }
}
