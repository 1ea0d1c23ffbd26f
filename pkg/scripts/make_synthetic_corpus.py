"""Generate the committed synthetic fact/myth corpus.

Template sentences about child development, 440 facts and 200 myths
(about the 2.2:1 imbalance of the real data). A small share of statements
borrow phrasing from the other class so the classes overlap. Output is
deterministic for a given seed.

    python scripts/make_synthetic_corpus.py [--seed 7] [--out PATH]
"""
import argparse
import csv
import random
from pathlib import Path

TABLE_ROWS = [
    ("Fact", "Play is like children's work."),
    ("Fact", "Children communicate to express their needs."),
    ("Fact", "Young babies need consistent responsive care."),
    ("Myth", "Lifting weights stunts growth."),
    ("Myth", "It's too late for my kid."),
    ("Myth", "Little Brain, Little Activity."),
]

SUBJECTS = [
    "Children", "Young children", "Toddlers", "Babies", "Infants", "Preschoolers",
    "Kids", "School-age children", "Newborns", "Most children", "A child",
    "Every child", "Young learners", "Twins", "Boys and girls",
]

FACT_PREDICATES = [
    "develop language skills through everyday conversation",
    "learn best through play and exploration",
    "need consistent responsive care to develop secure attachment",
    "develop at different rates and that is normal",
    "build brain connections when adults talk and read with them",
    "benefit from reading aloud with caregivers",
    "develop motor skills by moving, climbing and playing outdoors",
    "learn emotional regulation from calm and supportive adults",
    "need plenty of sleep for healthy brain development",
    "develop social skills by playing with other children",
    "learn new words faster when parents respond to their babbling",
    "show rapid brain development in the first five years",
    "benefit from routines that make their day predictable",
    "develop problem solving skills through hands-on play",
    "learn to share gradually as their brains mature",
    "develop empathy when adults name and discuss feelings",
    "need nutritious food to support growth and development",
    "develop fine motor control through drawing and stacking blocks",
    "can learn two languages at the same time without harm",
    "develop self-control slowly over many years",
    "learn through repetition and enjoy hearing favourite stories again",
    "benefit from safe and loving relationships with caregivers",
    "develop curiosity when adults encourage their questions",
    "learn numbers through counting games and everyday activities",
    "develop confidence when praised for effort rather than results",
    "need time outdoors for physical development",
    "develop memory and attention through pretend play",
    "learn by watching and imitating the people around them",
    "develop resilience with the support of trusted adults",
    "grow and develop in spurts rather than at a steady pace",
]

MYTH_PREDICATES = [
    "who walk early are always more intelligent",
    "become spoiled if you pick them up when they cry",
    "get hyperactive from eating sugar",
    "become smarter from listening to classical music",
    "are harmed by learning two languages at once",
    "who talk late will never catch up",
    "cannot learn anything before they can speak",
    "should be forced to use their right hand",
    "stop growing if they lift weights",
    "are too young to feel stress or sadness",
    "only use ten percent of their brain",
    "must be kept in a baby walker to learn walking",
    "need flashcards every day to become geniuses",
    "always outgrow every delay without any help",
    "are naturally bad at maths if their parents were",
    "learn nothing from play and waste their time",
    "are fully developed by the age of three",
    "cry only to manipulate their parents",
    "should never be read to before they can talk",
    "become lazy if they sleep too much",
]

FACT_TAILS = [
    "", "", "", " in early childhood", " during the first years of life",
    " according to child development research", " with the right support",
    " at home and in childcare", " as their brains develop",
]

MYTH_TAILS = [
    "", "", "", " everyone knows that", " so parents must act early",
    " and nothing can change that", " according to some parents",
    " as grandparents often say",
]

STANDALONE_FACTS = [
    "Early experiences shape the developing brain.",
    "Responsive relationships help children develop language.",
    "Reading together every day supports literacy development.",
    "Physical activity supports healthy growth and development.",
    "Play helps children learn about the world.",
]

STANDALONE_MYTHS = [
    "Brain development is finished before school starts.",
    "Left-handed children develop more slowly.",
    "Talking to babies is pointless because they cannot understand.",
    "Screen time teaches babies language better than people.",
    "Development happens the same way for every child.",
]


def sentence(subject, predicate, tail):
    if subject in ("A child", "Every child") and not predicate.startswith(("can", "who")):
        words = predicate.split(" ", 1)
        verb = words[0]
        if verb.endswith("s"):
            verb += "es"
        elif verb.endswith("y") and verb not in ("play", "enjoy"):
            verb = verb[:-1] + "ies"
        elif verb in ("are", "need", "become", "must", "should", "cry", "only", "always"):
            subject = "Children"
        else:
            verb += "s"
        if subject != "Children":
            predicate = " ".join([verb] + words[1:])
    text = f"{subject} {predicate}{tail}."
    return text[0].upper() + text[1:]


def generate(seed, n_fact=440, n_myth=200, overlap=0.08):
    rng = random.Random(seed)
    rows = list(TABLE_ROWS)
    rows += [("Fact", s) for s in STANDALONE_FACTS]
    rows += [("Myth", s) for s in STANDALONE_MYTHS]
    seen = {text for _, text in rows}

    def draw(label, predicates, tails, other_predicates, other_tails):
        while True:
            if rng.random() < overlap:
                predicate = rng.choice(other_predicates)
                tail = rng.choice(tails)
            else:
                predicate = rng.choice(predicates)
                tail = rng.choice(tails + other_tails[:2])
            text = sentence(rng.choice(SUBJECTS), predicate, tail)
            if text not in seen:
                seen.add(text)
                return (label, text)

    counts = {"Fact": sum(l == "Fact" for l, _ in rows), "Myth": sum(l == "Myth" for l, _ in rows)}
    while counts["Fact"] < n_fact:
        rows.append(draw("Fact", FACT_PREDICATES, FACT_TAILS, MYTH_PREDICATES, MYTH_TAILS))
        counts["Fact"] += 1
    while counts["Myth"] < n_myth:
        rows.append(draw("Myth", MYTH_PREDICATES, MYTH_TAILS, FACT_PREDICATES, FACT_TAILS))
        counts["Myth"] += 1
    rng.shuffle(rows)
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument(
        "--out",
        default=str(Path(__file__).resolve().parents[1] / "src" / "mythlab" / "data" / "synthetic_corpus.csv"),
    )
    args = ap.parse_args()
    rows = generate(args.seed)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["label", "statement"])
        writer.writerows(rows)
    print(f"wrote {len(rows)} statements to {args.out}")


if __name__ == "__main__":
    main()
