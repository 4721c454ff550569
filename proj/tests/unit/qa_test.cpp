#include <gtest/gtest.h>

#include "mosbench/core/errors.hpp"
#include "mosbench/qa/vote.hpp"
#include "oracles/brute.hpp"

using namespace mosbench;
using namespace mosbench::qa;

TEST(MajorityVoteTest, StrictMajority) {
  EXPECT_TRUE(majority_vote({true, true, false}).answer);
  EXPECT_FALSE(majority_vote({true, false, false}).answer);
  EXPECT_FALSE(majority_vote({true, true, false}).tie);
}

TEST(MajorityVoteTest, TieResolvesToNo) {
  const auto r = majority_vote({true, false});
  EXPECT_FALSE(r.answer);
  EXPECT_TRUE(r.tie);
}

TEST(MajorityVoteTest, EmptyThrows) { EXPECT_THROW(majority_vote({}), DomainError); }

TEST(AggregateVideoTest, AllSubtasksMustPass) {
  // Two of three voters say yes to subtask 0, one of three to subtask 1.
  const auto vs = make_voteset("v", {{true, false}, {true, true}, {false, false}}, 2);
  EXPECT_FALSE(aggregate_video(vs).answer);
  const auto ok = make_voteset("v", {{true, true}, {true, true}, {false, false}}, 2);
  EXPECT_TRUE(aggregate_video(ok).answer);
}

TEST(AggregateVideoTest, CountsTies) {
  const auto vs = make_voteset("v", {{true, true}, {false, true}}, 2);
  const auto r = aggregate_video(vs);
  EXPECT_FALSE(r.answer);
  EXPECT_EQ(r.ties, 1);
}

TEST(AggregateVideoTest, NoVotesThrows) {
  EXPECT_THROW(aggregate_video(VoteSet{"v", {{}, {}}}), DomainError);
}

TEST(AggregateVideoTest, SkipsSubtasksWithoutVotes) {
  EXPECT_TRUE(aggregate_video(VoteSet{"v", {{true}, {}}}).answer);
}

TEST(AggregateVideoTest, ExhaustiveUpToThreeByFive) {
  long cases = 0;
  for (std::size_t subjects = 1; subjects <= 5; ++subjects) {
    for (std::size_t subtasks = 1; subtasks <= 3; ++subtasks) {
      const std::size_t bits = subjects * subtasks;
      for (std::uint32_t mask = 0; mask < (1u << bits); ++mask) {
        std::vector<std::vector<bool>> rows(subjects, std::vector<bool>(subtasks));
        for (std::size_t s = 0; s < subjects; ++s) {
          for (std::size_t t = 0; t < subtasks; ++t) rows[s][t] = (mask >> (s * subtasks + t)) & 1u;
        }
        ASSERT_EQ(aggregate_video(make_voteset("v", rows, subtasks)).answer,
                  oracle::qa_enumerated(rows, subtasks))
            << subjects << "x" << subtasks << " mask " << mask;
        ++cases;
      }
    }
  }
  EXPECT_EQ(cases, (2 + 4 + 8 + 16 + 32) + (4 + 16 + 64 + 256 + 1024) + (8 + 64 + 512 + 4096 + 32768));
}
