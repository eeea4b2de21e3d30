"""Generate the 30-record field-tagged fixture corpus.

Run from the repository root:  python3 tests/fixtures/make_corpus30.py
Regenerates corpus30.txt deterministically from the table below; the gold
per-paper acknowledgee sets live in corpus30_manifest.json (see
tests/make_fixture_manifest.py).
"""

from pathlib import Path

JOURNALS = {
    "AER": "AMERICAN ECONOMIC REVIEW",
    "ECN": "ECONOMETRICA",
    "JPE": "JOURNAL OF POLITICAL ECONOMY",
    "QJE": "QUARTERLY JOURNAL OF ECONOMICS",
    "RES": "REVIEW OF ECONOMIC STUDIES",
}

REFS = {
    "RA1": "Card D., 1994, AM ECON REV, V84, P772",
    "RA2": "Katz L.F., 1992, Q J ECON, V107, P35",
    "RA3": "Autor D., 2003, J LABOR ECON, V21, P1",
    "RA4": "Angrist J., 1991, J AM STAT ASSOC, V87, P328",
    "RA5": "Heckman J., 1979, ECONOMETRICA, V47, P153",
    "RA6": "Moretti E., 2004, J ECONOMETRICS, V121, P175",
    "RA7": "Chetty R., 2009, AM ECON J, V1, P31",
    "RA8": "Saez E., 2001, REV ECON STUD, V68, P205",
    "RB1": "Fudenberg D., 1986, ECONOMETRICA, V54, P533",
    "RB2": "Myerson R., 1981, MATH OPER RES, V6, P58",
    "RB3": "Tirole J., 1988, THEORY IND ORG",
    "RB4": "Maskin E., 1999, REV ECON STUD, V66, P23",
    "RB5": "Aumann R., 1976, ANN STAT, V4, P1236",
    "RB6": "Kreps D., 1982, J ECON THEORY, V27, P253",
    "RB7": "Rubinstein A., 1982, ECONOMETRICA, V50, P97",
    "RB8": "Milgrom P., 1982, ECONOMETRICA, V50, P1089",
}

# (id, journal, year, authors, doc_type, ack_text, ref keys)
RECORDS = [
    ("W001", "QJE", 2015, ["Flores, Maria"], "Article",
     "We thank David Lang, Lawrence F. Katz, and Sofia Marino for helpful "
     "comments and suggestions. Seminar participants at Harvard University "
     "provided valuable feedback. Financial support from the National "
     "Science Foundation is gratefully acknowledged.",
     ["RA1", "RA2", "RA3"]),
    ("W002", "AER", 2015, ["Lang, David"], "Article",
     "I am grateful to Maria Flores and Lawrence Katz for insightful "
     "discussions, and to two anonymous referees and the editor for "
     "constructive comments. Conference audiences at the National Bureau "
     "summer workshop improved the paper.",
     ["RA1", "RA2", "RA4"]),
    ("W003", "ECN", 2016, ["Santos, Elena"], "Article",
     "We thank Wei Zhang and Grace Liu for detailed comments on earlier "
     "drafts. We also thank seminar participants at Yale University.",
     ["RA2", "RA3", "RA5"]),
    ("W004", "QJE", 2016, ["Zhang, Wei"], "Article",
     "Elena Santos, Maria Flores, and Chinwe Okafor provided generous "
     "advice. We thank participants at the Econometric Society meetings "
     "and an anonymous referee.",
     ["RA3", "RA4", "RA5"]),
    ("W005", "AER", 2017, ["Katz, Lawrence F."], "Article",
     "We thank Maria Flores, Tom Becker, and Nina Adler for thoughtful "
     "suggestions, and the Sloan Foundation for financial support.",
     ["RA1", "RA5", "RA6"]),
    ("W006", "JPE", 2017, ["Okafor, Chinwe"], "Article",
     "I thank Elena Santos for her advice and encouragement, and audience "
     "members at the Royal Economic Society conference.",
     ["RA4", "RA6"]),
    ("W007", "RES", 2015, ["Dubois, Pierre"], "Article",
     "We are grateful to Anna Rossi, Henrik Olsen, and Lawrence F. Katz "
     "for comments, and to the European Research Council for funding.",
     ["RB1", "RB2", "RB3"]),
    ("W008", "ECN", 2016, ["Rossi, Anna"], "Article",
     "Petr Novak and Julia Stein read early drafts and offered helpful "
     "remarks. The editor and three referees substantially improved the "
     "paper.",
     ["RB1", "RB2", "RB4"]),
    ("W009", "RES", 2017, ["Novak, Petr"], "Article",
     "We thank Pierre Dubois and Lawrence Katz for inspiring "
     "conversations, and seminar participants at Toulouse School sessions.",
     ["RB2", "RB3", "RB5"]),
    ("W010", "AER", 2018, ["Tanaka, Yuki", "Berg, Ida"], "Article",
     "We thank Victor Cruz, Grace Liu, and Sofia Marino for useful "
     "comments, and workshop participants at University College London.",
     ["RA6", "RA7"]),
    ("W011", "JPE", 2018, ["Moreau, Claire", "Dubois, Pierre"], "Article",
     "Omar Farouk and Paula Mendes provided excellent research assistance. "
     "We thank Lawrence F. Katz and Wei Zhang for comments on an early "
     "draft.",
     ["RB3", "RB4", "RB6"]),
    ("W012", "QJE", 2018, ["O'Brien, Sean"], "Article",
     "We thank Julia Stein and Henrik Olsen for perceptive comments. "
     "Funding from the Ford Foundation is acknowledged.",
     ["RB4", "RB5"]),
    ("W013", "ECN", 2019, ["Silva, Joao", "Petrov, Dmitri",
                            "Haddad, Leila", "Virtanen, Aino"], "Article",
     "We thank Lawrence F. Katz for his generous advice, and seminar "
     "audiences at Stockholm University. Leila Haddad gratefully "
     "acknowledges support from the Finnish Research Council.",
     ["RA7", "RA8"]),
    ("W014", "RES", 2019, ["Costa, Rui"], "Article",
     "I am indebted to Sofia Marino and Victor Cruz for their detailed "
     "reading of the manuscript, and to discussants at the European "
     "Economic Association congress.",
     ["RA5", "RA8"]),
    ("W015", "AER", 2019, ["Bauer, Franz", "Lindqvist, Erik"], "Article",
     "We thank Nina Adler, Tom Becker, and Grace Liu for constructive "
     "criticism, and the German Research Foundation for funding.",
     ["RB6", "RB7"]),
    ("W016", "JPE", 2015, ["Lindqvist, Erik"], "Article",
     "Seminar participants at Uppsala University and the editor provided "
     "helpful comments. I thank Henrik Olsen for sharing data.",
     ["RB7", "RB8"]),
    ("W017", "QJE", 2017, ["Tanaka, Yuki"], "Article",
     "We thank Wei Zhang, Victor Cruz, and Maria Flores for comments, "
     "conference participants at the Econometric Society winter meetings, "
     "and two anonymous reviewers.",
     ["RA2", "RA8"]),
    ("W018", "AER", 2016, ["Berg, Ida"], "Article",
     "I am grateful to Paula Mendes for outstanding assistance and to "
     "Lawrence Katz for his encouragement throughout this project.",
     ["RA1", "RA7"]),
    ("W019", "ECN", 2019, ["Hellman, Ziv", "Levy, John Yehuda"], "Article",
     "Ziv Hellman acknowledges research support by Israel Science "
     "Foundation Grant 1626/18.",
     ["RB1", "RB8"]),
    ("W020", "RES", 2018, ["Rossi, Anna"], "Article",
     "Anna Rossi thanks the Leverhulme Trust for generous financial "
     "support during her sabbatical year.",
     ["RB5", "RB6"]),
    ("W021", "JPE", 2016, ["Petrov, Dmitri"], "Article",
     "We thank Grace Liu and Julia Stein for many helpful conversations "
     "about earlier versions of this paper.",
     []),
    ("W022", "AER", 2018, ["Haddad, Leila"], "Article",
     "Comments from seminar participants at the Paris School are "
     "gratefully acknowledged.",
     ["RB2", "RB7"]),
    ("W023", "QJE", 2019, ["Virtanen, Aino", "Costa, Rui"], "Article",
     "We are grateful to David Lang, Sofia Marino, and Omar Farouk for "
     "advice at different stages of this project.",
     ["RA3", "RA6", "RB8"]),
    ("W024", "JPE", 2015, ["Silva, Joao"], "Article",
     "I thank Victor Cruz for his careful reading and Nina Adler for "
     "suggestions that reshaped the final section.",
     ["RA4", "RA7"]),
    ("W025", "ECN", 2017, ["Moreau, Claire"], "Article", None,
     ["RB1", "RB3"]),
    ("W026", "RES", 2016, ["Bauer, Franz"], "Article", None,
     ["RA1", "RA4"]),
    ("W027", "AER", 2015, ["Costa, Rui", "Berg, Ida"], "Article", None,
     ["RB6", "RB8"]),
    ("W028", "QJE", 2019, ["Okafor, Chinwe"], "Article", None,
     ["RA5", "RA7"]),
    ("W029", "JPE", 2018, ["Lindqvist, Erik"], "Review",
     "We thank Tom Becker for comments.",
     ["RB5"]),
    ("W030", "ECN", 2015, ["Novak, Petr"], "Editorial Material", None, []),
]


def wrap(text: str, width: int = 68) -> list[str]:
    words = text.split()
    lines: list[str] = []
    current = ""
    for word in words:
        if current and len(current) + 1 + len(word) > width:
            lines.append(current)
            current = word
        else:
            current = f"{current} {word}" if current else word
    if current:
        lines.append(current)
    return lines


def main() -> None:
    out = ["FN Fixture Export", "VR 1.0"]
    for rid, journal, year, authors, doc_type, ack, refs in RECORDS:
        out.append("PT J")
        for i, author in enumerate(authors):
            out.append(f"AU {author}" if i == 0 else f"   {author}")
        out.append(f"SO {JOURNALS[journal]}")
        out.append(f"DT {doc_type}")
        out.append(f"PY {year}")
        if ack is not None:
            lines = wrap(ack)
            out.append(f"FT {lines[0]}")
            out.extend(f"   {line}" for line in lines[1:])
        for i, key in enumerate(refs):
            out.append(f"CR {REFS[key]}" if i == 0 else f"   {REFS[key]}")
        out.append(f"UT WOS:{rid}")
        out.append("ER")
        out.append("")
    out.append("EF")
    path = Path(__file__).parent / "corpus30.txt"
    path.write_text("\n".join(out) + "\n", encoding="utf-8")
    print(f"wrote {path} ({len(RECORDS)} records)")


if __name__ == "__main__":
    main()
