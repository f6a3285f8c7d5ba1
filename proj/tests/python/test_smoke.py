import math
import os
import tempfile
import unittest

import nmtdebug


def identity(n):
    return [[1.0 if i == j else 0.0 for i in range(n)] for j in range(n)]


class SmokeTest(unittest.TestCase):
    def test_metrics(self):
        self.assertAlmostEqual(nmtdebug.coverage_deviation_penalty([[1.0, 0.0]]), -0.5 * math.log(2), places=12)
        self.assertAlmostEqual(nmtdebug.absentmindedness_out([[0.5, 0.5], [0.5, 0.5]]), -math.log(2), places=12)
        self.assertAlmostEqual(nmtdebug.overlap_penalty(10, 1.0), 7.1485, places=3)
        self.assertEqual(nmtdebug.similarity("abcd", "bcde"), 0.75)
        self.assertAlmostEqual(nmtdebug.sentence_bleu(["the", "cat", "sat"], ["the", "cat", "sat", "down"]).value,
                               0.7165, places=4)

    def test_score_and_sort(self):
        toks = "the quick brown fox jumps over the lazy dog now".split()
        copy = nmtdebug.make_record("copy", toks, toks, identity(len(toks)))
        other = nmtdebug.make_record("other", ["ein", "Haus"], ["a", "house"], identity(2), "a house")
        scored = nmtdebug.score_dataset(nmtdebug.make_dataset("sys", [copy, other]))
        self.assertEqual(len(scored), 2)
        self.assertIn("POSSIBLE_UNTRANSLATED", scored.scores[0].flag_names)
        self.assertIsNone(scored.scores[0].bleu)
        self.assertEqual(scored.scores[1].bleu, 1.0)
        self.assertEqual(nmtdebug.sort_indices(scored, "confidence", "asc"), [0, 1])
        with self.assertRaises(nmtdebug.SortKeyError):
            nmtdebug.sort_indices(scored, "bleu")

    def test_parse_and_index_round_trip(self):
        data = nmtdebug.parse_canonical("r1\ta b\tx\t0.5,0.5\nr2\tc\ty z\t1;1\tref\n", "demo")
        text = nmtdebug.serialize_canonical(data)
        self.assertEqual(nmtdebug.serialize_canonical(nmtdebug.parse_canonical(text, "demo")), text)
        self.assertIsNone(data.records[0].ref_text)
        self.assertEqual(data.records[1].ref_text, "ref")
        scored = nmtdebug.score_dataset(data)
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "demo.idx")
            nmtdebug.save_index(scored, path)
            back = nmtdebug.load_index(path)
        self.assertEqual(nmtdebug.serialize_index(back), nmtdebug.serialize_index(scored))

    def test_errors(self):
        with self.assertRaises(nmtdebug.ParseError):
            nmtdebug.parse_canonical("x\ta b\tc\t1\n")
        with self.assertRaises(ValueError):
            nmtdebug.make_record("x", ["a"], ["b"], [[1.0, 0.0]])

    def test_render(self):
        rec = nmtdebug.make_record("r", ["a", "b"], ["x", "y"], identity(2))
        grid = nmtdebug.render_matrix_text(rec)
        self.assertTrue(grid.startswith("source: [0]a [1]b"))
        svg = nmtdebug.render_record_svg(rec, nmtdebug.score_record(rec))
        self.assertEqual(svg.count("<path "), 2)


if __name__ == "__main__":
    unittest.main()
