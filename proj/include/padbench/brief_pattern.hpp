// Generated by tools/gen_brief_pattern.py. Do not edit.
#pragma once

#include <array>
#include <cstdint>

namespace padbench::detail {

// (x1, y1, x2, y2) offsets from the keypoint, radius <= 13 px.
inline constexpr std::array<std::array<std::int8_t, 4>, 256> kBriefPattern = {{
    {{0, 0, 0, 3}}, {{4, -5, -5, -3}}, {{2, 8, 1, -7}}, {{3, -9, -1, -7}},
    {{-7, 2, -4, 5}}, {{-2, -10, 2, -7}}, {{-5, -1, 0, 8}}, {{-5, 1, 0, -2}},
    {{-3, -3, -10, 6}}, {{-3, 3, 3, 2}}, {{8, 5, -4, -1}}, {{-6, -1, -7, -6}},
    {{-4, 4, -2, 2}}, {{3, 0, -4, 4}}, {{0, -3, 4, 3}}, {{8, 10, 2, -8}},
    {{-1, 3, 5, -6}}, {{9, 7, -2, -3}}, {{-8, -1, -3, -2}}, {{6, 4, 5, -3}},
    {{2, -4, 3, 4}}, {{7, -9, 7, -2}}, {{9, 5, 2, 6}}, {{-2, -3, 6, -7}},
    {{-9, 1, -8, -2}}, {{2, 5, -3, -1}}, {{-4, 4, 9, -2}}, {{-1, 5, 2, 10}},
    {{-5, -2, -5, 8}}, {{-6, -7, -9, -2}}, {{-1, 5, 8, 0}}, {{-3, -1, -5, 5}},
    {{-3, -8, -1, 4}}, {{9, 2, -9, 0}}, {{6, 1, 8, -1}}, {{0, 0, 6, -2}},
    {{-5, 4, -7, 2}}, {{1, -1, 3, 2}}, {{-5, 4, 1, 2}}, {{1, -4, 2, 9}},
    {{0, 0, -3, -1}}, {{-3, -10, -4, 7}}, {{5, -4, -8, -7}}, {{6, -11, -7, 0}},
    {{-2, -2, 7, -8}}, {{4, -2, -5, -6}}, {{6, 1, -2, -5}}, {{0, -4, -6, -8}},
    {{3, 1, -2, 11}}, {{11, -1, -2, -6}}, {{-11, -3, 2, 6}}, {{-11, -5, -3, -6}},
    {{-2, -4, -12, -4}}, {{10, -3, 0, -3}}, {{-6, -1, 12, -3}}, {{5, -6, -1, 6}},
    {{3, 1, -1, 0}}, {{-1, -3, 4, -4}}, {{8, 2, -7, -2}}, {{3, 10, 4, -9}},
    {{-3, -3, 0, 3}}, {{-2, 0, 2, -7}}, {{2, 0, -5, 3}}, {{2, 1, 0, 5}},
    {{7, -4, -4, 8}}, {{3, 9, 8, 6}}, {{-5, -11, -11, 5}}, {{-2, -3, 5, 2}},
    {{-6, -3, -4, 11}}, {{-5, 1, 5, 0}}, {{12, 0, 4, -3}}, {{2, 7, 5, 3}},
    {{2, 9, 1, 2}}, {{9, -5, 0, -6}}, {{0, -11, 7, -2}}, {{-1, 6, 6, 2}},
    {{10, 1, -6, -4}}, {{0, -5, -5, -5}}, {{10, -3, 10, 1}}, {{6, -1, -1, 7}},
    {{-1, 5, -3, -8}}, {{-1, -1, 2, 7}}, {{-1, -3, -2, 1}}, {{-4, -3, -4, -5}},
    {{7, 0, -3, -6}}, {{4, 5, 12, -2}}, {{8, 6, 0, -9}}, {{2, -1, 4, 5}},
    {{-1, -3, 2, 5}}, {{5, 2, -11, -3}}, {{-1, -1, -5, 0}}, {{8, -4, 1, 2}},
    {{-11, -4, 0, 6}}, {{-7, 0, -5, -9}}, {{-7, 4, -3, -2}}, {{1, 7, -10, -2}},
    {{-4, -5, 1, 2}}, {{7, -6, -4, 1}}, {{-8, 1, -2, -3}}, {{-3, 1, 0, -2}},
    {{9, 9, 10, -2}}, {{2, -4, 1, 5}}, {{1, 5, -2, 5}}, {{3, 0, -6, 9}},
    {{-7, -3, -7, 9}}, {{-3, 7, -2, 0}}, {{-2, 5, -2, -11}}, {{-5, -10, -2, -1}},
    {{-6, 3, -4, -3}}, {{-5, 0, 6, 2}}, {{-2, -1, 1, 2}}, {{3, -5, -2, -2}},
    {{3, 9, 7, 4}}, {{-6, -1, 2, 7}}, {{-7, -2, -3, 8}}, {{6, 1, 8, -1}},
    {{2, 2, 1, 0}}, {{2, -5, -1, 0}}, {{6, -2, -3, 9}}, {{-9, 4, 7, -1}},
    {{7, 1, 1, 2}}, {{2, -4, 4, -11}}, {{-7, -4, 5, 2}}, {{8, -5, 0, -6}},
    {{5, 3, -5, -9}}, {{0, 3, 6, -8}}, {{7, -3, -2, -4}}, {{-2, -3, 10, -3}},
    {{-6, 5, 3, 6}}, {{1, 6, 12, -4}}, {{-1, -11, -8, -3}}, {{8, -6, -9, -1}},
    {{10, 4, -5, 4}}, {{-5, -4, 0, -12}}, {{6, -1, -7, -10}}, {{-4, 2, 3, 2}},
    {{-4, -2, -3, 2}}, {{-4, -1, 3, 6}}, {{3, -4, 7, -6}}, {{-5, 1, 8, 1}},
    {{7, -6, -2, 7}}, {{8, 9, 2, 2}}, {{2, 10, 6, 0}}, {{-2, -3, 6, -4}},
    {{-6, 3, -1, -5}}, {{3, 0, 8, 1}}, {{-2, 8, 3, 3}}, {{-8, -8, -3, 7}},
    {{0, 2, 2, -2}}, {{-4, -5, 2, 3}}, {{0, -5, -6, 0}}, {{-1, -11, 5, 1}},
    {{3, 4, 1, -11}}, {{2, 3, 3, 4}}, {{-3, -3, 9, 4}}, {{-5, -3, 0, 6}},
    {{-3, -4, -2, 4}}, {{1, -7, -1, 8}}, {{4, 5, -10, -4}}, {{-2, 2, 0, 3}},
    {{-2, 4, -3, 11}}, {{-3, 5, 1, 3}}, {{-1, -10, -6, 8}}, {{-4, 0, -7, 9}},
    {{4, 4, 2, -5}}, {{2, -3, 0, 1}}, {{7, 5, 4, 3}}, {{3, 3, 4, 0}},
    {{-5, -6, 1, 11}}, {{3, -8, -5, 0}}, {{-2, 3, 0, 9}}, {{-1, -9, 4, 5}},
    {{2, 5, -3, 0}}, {{4, 6, 2, -1}}, {{-6, 7, -4, -1}}, {{0, 4, 3, -2}},
    {{-3, -6, -3, 2}}, {{-10, -1, -3, 0}}, {{1, 3, 10, -3}}, {{2, 1, 6, -1}},
    {{-2, 3, 1, 7}}, {{0, -3, 1, 1}}, {{-4, 2, 4, 2}}, {{-4, 4, -3, -5}},
    {{10, 5, -7, -10}}, {{-4, -3, -8, -5}}, {{0, 6, -5, 0}}, {{4, 10, 2, 2}},
    {{11, -2, -7, 1}}, {{2, -5, 6, 2}}, {{4, 1, -2, 9}}, {{11, -5, 10, 8}},
    {{2, -3, -2, 1}}, {{-1, 0, 3, -2}}, {{-11, 3, -4, 10}}, {{-5, -5, -1, -11}},
    {{-6, 3, 10, -4}}, {{0, 2, -8, 6}}, {{5, -8, 5, -5}}, {{-1, -11, 1, 11}},
    {{1, 4, -1, -9}}, {{9, -7, 0, -1}}, {{-12, -5, -3, 5}}, {{0, 0, 1, -4}},
    {{-4, 2, 5, -5}}, {{-4, -2, -1, 5}}, {{5, -6, 1, 7}}, {{4, -3, 2, -2}},
    {{-4, 6, 0, -9}}, {{-2, 12, 0, -10}}, {{-5, 8, 8, 8}}, {{-4, 5, 2, 12}},
    {{-8, 1, -6, -3}}, {{-11, -3, -2, -3}}, {{-9, 0, 5, 2}}, {{6, -8, -5, -1}},
    {{-4, 4, -1, 5}}, {{2, -2, 0, -3}}, {{12, 4, -1, 1}}, {{-5, -5, 1, -1}},
    {{9, -4, 0, -9}}, {{2, 6, -5, -5}}, {{9, -5, 1, -8}}, {{-1, 2, 0, 8}},
    {{1, -2, 9, 4}}, {{-8, -10, -3, 2}}, {{-3, 0, 2, 6}}, {{6, 1, -4, 7}},
    {{6, 5, 6, 0}}, {{5, -1, 1, -5}}, {{-2, 9, 6, -7}}, {{9, -3, 1, -7}},
    {{7, -1, 0, 3}}, {{4, 0, 6, 1}}, {{1, 4, 3, -1}}, {{-5, 1, -5, 5}},
    {{-3, -3, 4, 6}}, {{-6, 3, -2, -4}}, {{-4, 11, 7, 0}}, {{7, 6, -3, 2}},
    {{3, -10, 4, -3}}, {{-5, -5, 7, 6}}, {{1, 0, 12, 3}}, {{4, 2, 3, -8}},
    {{6, -1, 5, 1}}, {{7, 10, -1, 1}}, {{2, -1, 5, -5}}, {{-2, -4, -8, 4}},
    {{0, -8, 3, 0}}, {{-2, 7, -1, 9}}, {{2, 1, 4, -7}}, {{-4, -1, 0, 8}},
    {{1, 7, -2, -3}}, {{1, 0, 8, 0}}, {{3, 3, -2, 3}}, {{5, -4, -8, -1}},
}};

}  // namespace padbench::detail
