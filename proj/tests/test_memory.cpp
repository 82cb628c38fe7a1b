#include <catch2/catch_amalgamated.hpp>

#include "support/oracle.hpp"
#include "tempora/memory.hpp"

using namespace tempora;

namespace {

DialogueSession fig_session() {
  DialogueSession s;
  s.session_id = "s2";
  s.timestamp = CalDate{2020, 3, 16};
  s.turns = {{"Sharon", "My survival course started on 12 March 2020. "
                        "It was a week-long course and it was intense."},
             {"Emma", "Wow, glad you made it through!"}};
  return s;
}

DialogueCorpus small_corpus() {
  DialogueCorpus corpus;
  corpus.conversation_id = "conv";
  corpus.speakers = {"Sharon", "Emma"};
  DialogueSession s1;
  s1.session_id = "s1";
  s1.timestamp = CalDate{2020, 3, 9};
  s1.turns = {{"Sharon", "I signed up for a survival course."}};
  corpus.sessions = {s1, fig_session()};
  return corpus;
}

TemporalQuestion some_question() {
  TemporalQuestion q;
  q.question_id = "q1";
  q.conversation_id = "conv";
  q.qtype = QType::TA;
  q.text = "When did Sharon's survival course start?";
  q.options = {"03/14/2020", "03/16/2020", "03/12/2020", "03/19/2020",
               "Unanswerable"};
  q.gold = 2;
  return q;
}

ScriptedBackend fixed(const std::string& reply, int* calls = nullptr) {
  return ScriptedBackend([reply, calls](const ChatRequest&) {
    if (calls != nullptr) ++*calls;
    return reply;
  });
}

const SanityWindow kWindow =
    SanityWindow::around(CalDate{2020, 3, 9}, CalDate{2020, 3, 16});

}  // namespace

TEST_CASE("timeline memorization separates event date from mention date") {
  auto backend = fixed(
      "2020-03-12 | Sharon's week-long survival course started.\n"
      "2020-03-16 | Sharon and Emma caught up about the course.\n");
  auto entries = memorize_timeline(fig_session(), backend, kWindow, 1);
  REQUIRE(entries.size() == 2);
  CHECK(entries[0].id == 1);
  CHECK(entries[1].id == 2);
  for (const auto& e : entries) {
    CHECK(e.mention_date == CalDate{2020, 3, 16});
    CHECK(e.session_id == "s2");
    CHECK(e.kind == MemoryKind::timeline);
  }
  REQUIRE(entries[0].event_date.has_value());
  CHECK(*entries[0].event_date == CalDate{2020, 3, 12});
  CHECK(entries[0].summary.find("survival course") != std::string::npos);
}

TEST_CASE("degenerate session yields a single self-dated entry") {
  auto backend = fixed("2020-03-16 | Small talk about the weather.\n");
  auto entries = memorize_timeline(fig_session(), backend, kWindow, 5);
  REQUIRE(entries.size() == 1);
  CHECK(*entries[0].event_date == entries[0].mention_date);
}

TEST_CASE("relative weekday inference checks out against the calendar") {
  // the session mentions "next Friday" relative to 2020-03-16
  auto backend = fixed("2020-03-20 | Emma's hiking trip planned for next Friday.\n");
  auto entries = memorize_timeline(fig_session(), backend, kWindow, 1);
  REQUIRE(entries.size() == 1);
  REQUIRE(entries[0].event_date.has_value());
  CHECK(oracle::from_lib(*entries[0].event_date) ==
        oracle::next_weekday(oracle::Date{2020, 3, 16}, 5, 1));
}

TEST_CASE("UNKNOWN dates are kept, hallucinated dates are demoted") {
  auto backend = fixed(
      "UNKNOWN | Emma went hiking at some point.\n"
      "1900-01-01 | An impossible ancient event.\n"
      "03/12/2020 | Course start in US date form.\n");
  auto entries = memorize_timeline(fig_session(), backend, kWindow, 1);
  REQUIRE(entries.size() == 3);
  CHECK_FALSE(entries[0].event_date.has_value());
  CHECK_FALSE(entries[1].event_date.has_value());  // outside the sanity window
  REQUIRE(entries[2].event_date.has_value());
  CHECK(*entries[2].event_date == CalDate{2020, 3, 12});
}

TEST_CASE("malformed timeline output: one re-prompt, then fallback") {
  SECTION("re-prompt recovers") {
    int calls = 0;
    ScriptedBackend backend([&calls](const ChatRequest& req) {
      ++calls;
      if (calls == 1) return std::string("I cannot format that, sorry.");
      CHECK(req.messages.size() == 4);  // original + bad reply + reminder
      return std::string("2020-03-12 | Course started.\n");
    });
    auto entries = memorize_timeline(fig_session(), backend, kWindow, 1);
    CHECK(calls == 2);
    REQUIRE(entries.size() == 1);
    CHECK(*entries[0].event_date == CalDate{2020, 3, 12});
  }
  SECTION("fallback entry after two bad replies") {
    int calls = 0;
    auto backend = fixed("still not the format", &calls);
    auto entries = memorize_timeline(fig_session(), backend, kWindow, 7);
    CHECK(calls == 2);
    REQUIRE(entries.size() == 1);
    CHECK(entries[0].id == 7);
    CHECK(entries[0].kind == MemoryKind::flat);
    CHECK(*entries[0].event_date == entries[0].mention_date);
    CHECK(entries[0].summary.find("survival course") != std::string::npos);
  }
}

TEST_CASE("flat memorization: one undated summary per session") {
  auto backend = fixed("Sharon told Emma about finishing her survival course.");
  MemoryEntry e = memorize_flat(fig_session(), backend, 3);
  CHECK(e.id == 3);
  CHECK(e.kind == MemoryKind::flat);
  CHECK(e.mention_date == CalDate{2020, 3, 16});
  // the baseline keeps only the mention date; 2020-03-12 is not represented
  CHECK(*e.event_date == CalDate{2020, 3, 16});
  CHECK(e.summary == "Sharon told Emma about finishing her survival course.");
}

TEST_CASE("flat memorization falls back to truncated session text") {
  int calls = 0;
  auto backend = fixed("   \n", &calls);
  MemoryEntry e = memorize_flat(fig_session(), backend, 1);
  CHECK(calls == 2);
  CHECK(e.summary.find("Sharon:") != std::string::npos);
  CHECK(e.summary.find("survival course") != std::string::npos);
}

TEST_CASE("memorize_corpus covers every session and keeps mention dates") {
  ScriptedBackend backend([](const ChatRequest& req) {
    // answer with a dated line for whichever session is being memorized
    const std::string& text = req.messages[1].text;
    if (text.find("Session ID: s1") != std::string::npos) {
      return std::string("2020-03-09 | Sharon signed up for the course.\n");
    }
    return std::string(
        "2020-03-12 | Course started.\n2020-03-16 | Catch-up chat.\n");
  });
  DialogueCorpus corpus = small_corpus();
  MemoryPool pool = memorize_corpus(corpus, backend, MemoryKind::timeline);
  CHECK(pool.conversation_id == "conv");
  REQUIRE(pool.entries.size() >= corpus.sessions.size());
  // ids are unique and sequential
  for (size_t i = 0; i < pool.entries.size(); ++i) {
    CHECK(pool.entries[i].id == static_cast<int>(i) + 1);
  }
  // every entry's mention date equals its session's timestamp
  for (const auto& e : pool.entries) {
    for (const auto& s : corpus.sessions) {
      if (s.session_id == e.session_id) CHECK(e.mention_date == s.timestamp);
    }
  }
  // every session contributed at least one entry
  for (const auto& s : corpus.sessions) {
    bool found = false;
    for (const auto& e : pool.entries) found |= e.session_id == s.session_id;
    CHECK(found);
  }

  MemoryPool flat = memorize_corpus(corpus, backend, MemoryKind::flat);
  CHECK(flat.entries.size() == corpus.sessions.size());
}

namespace {

MemoryPool pool_of(int n) {
  MemoryPool pool;
  pool.conversation_id = "conv";
  for (int i = 1; i <= n; ++i) {
    MemoryEntry e;
    e.id = i;
    e.session_id = "s1";
    e.mention_date = add_days(CalDate{2020, 1, 1}, i);
    e.event_date = add_days(CalDate{2020, 2, 1}, i);
    e.summary = "entry " + std::to_string(i);
    pool.entries.push_back(e);
  }
  return pool;
}

}  // namespace

TEST_CASE("retrieve keeps model order, drops unknown ids, truncates") {
  MemoryPool pool = pool_of(10);
  auto backend = fixed("ids: 7, 999, 2");
  auto got = retrieve(some_question(), pool, backend, 10);
  REQUIRE(got.size() == 2);
  CHECK(got[0].id == 7);
  CHECK(got[1].id == 2);

  auto backend2 = fixed("3, 1, 5");
  auto got2 = retrieve(some_question(), pool, backend2, 1);
  REQUIRE(got2.size() == 1);
  CHECK(got2[0].id == 3);

  // retrieval never fabricates: results always come from the pool
  for (const auto& e : got) CHECK(pool.find(e.id) != nullptr);
}

TEST_CASE("retrieve falls back to date-nearest entries on an empty parse") {
  MemoryPool pool = pool_of(10);
  auto backend = fixed("none of these look relevant");
  TemporalQuestion q = some_question();
  q.text = "What happened around 2020-02-03?";  // nearest event: entry 2
  auto got = retrieve(q, pool, backend, 3);
  REQUIRE(got.size() == 3);
  CHECK(got[0].id == 2);

  // no dates in the question: recency order
  TemporalQuestion q2 = some_question();
  q2.text = "What was the very last thing discussed?";
  auto got2 = retrieve(q2, pool, backend, 2);
  REQUIRE(got2.size() == 2);
  CHECK(got2[0].id == 10);
  CHECK(got2[1].id == 9);
}

TEST_CASE("retrieve chunks long pools and unions selections") {
  MemoryPool pool = pool_of(130);  // three chunks at 60 per chunk
  int calls = 0;
  ScriptedBackend backend([&calls](const ChatRequest& req) {
    ++calls;
    const std::string& listing = req.messages[1].text;
    if (listing.find("entry 1\n") != std::string::npos) return std::string("1");
    if (listing.find("entry 70\n") != std::string::npos) return std::string("70");
    return std::string("125");
  });
  auto got = retrieve(some_question(), pool, backend, 10);
  CHECK(calls == 3);
  REQUIRE(got.size() == 3);
  CHECK(got[0].id == 1);
  CHECK(got[1].id == 70);
  CHECK(got[2].id == 125);
}

TEST_CASE("retrieve preconditions") {
  MemoryPool empty;
  auto backend = fixed("1");
  CHECK_THROWS_AS(retrieve(some_question(), empty, backend, 5), DataError);
  MemoryPool pool = pool_of(3);
  CHECK_THROWS_AS(retrieve(some_question(), pool, backend, 0), ContractError);
}

TEST_CASE("corpus JSON round trip and validation") {
  DialogueCorpus corpus = small_corpus();
  DialogueCorpus back = corpus_from_json(to_json(corpus));
  CHECK(back.conversation_id == corpus.conversation_id);
  REQUIRE(back.sessions.size() == 2);
  CHECK(back.sessions[1].timestamp == CalDate{2020, 3, 16});
  CHECK(back.sessions[1].turns[0].text == corpus.sessions[1].turns[0].text);

  // non-increasing timestamps rejected
  DialogueCorpus bad = corpus;
  bad.sessions[1].timestamp = bad.sessions[0].timestamp;
  CHECK_THROWS_AS(validate(bad), DataError);
  // empty session rejected
  DialogueCorpus bad2 = corpus;
  bad2.sessions[0].turns.clear();
  CHECK_THROWS_AS(validate(bad2), DataError);
}

TEST_CASE("memory pool JSON round trip keeps unknown event dates") {
  MemoryPool pool = pool_of(2);
  pool.entries[1].event_date.reset();
  MemoryPool back = pool_from_json(to_json(pool));
  REQUIRE(back.entries.size() == 2);
  CHECK(back.entries[0].event_date == pool.entries[0].event_date);
  CHECK_FALSE(back.entries[1].event_date.has_value());
}

TEST_CASE("locomo import is best-effort") {
  nlohmann::json doc = {
      {"conversation",
       {{"speaker_a", "Debra"},
        {"speaker_b", "Ryan"},
        {"session_1_date_time", "1:56 pm on 8 May, 2023"},
        {"session_1",
         nlohmann::json::array(
             {{{"speaker", "Debra"}, {"text", "I told my mentor my idea."}},
              {{"speaker", "Ryan"}, {"text", "Great step!"}}})},
        {"session_2_date_time", "10:00 am on 21 May, 2023"},
        {"session_2",
         nlohmann::json::array(
             {{{"speaker", "Debra"}, {"clean_text", "I started my business!"}}})},
        {"session_3_date_time", "no date here"},
        {"session_3",
         nlohmann::json::array({{{"speaker", "Ryan"}, {"text", "dropped"}}})}}}};
  LocomoImportStats stats;
  DialogueCorpus corpus = import_locomo(doc, "locomo-1", &stats);
  CHECK(stats.sessions_imported == 2);
  CHECK(stats.sessions_skipped == 1);
  REQUIRE(corpus.sessions.size() == 2);
  CHECK(corpus.sessions[0].timestamp == CalDate{2023, 5, 8});
  CHECK(corpus.sessions[1].timestamp == CalDate{2023, 5, 21});
  CHECK(corpus.sessions[1].turns[0].text == "I started my business!");
  CHECK(corpus.speakers == std::vector<std::string>{"Debra", "Ryan"});
}
