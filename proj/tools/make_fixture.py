#!/usr/bin/env python3
"""Regenerates data/fixture: a synthetic 65-account, 6-category dataset.

Conventions of the fixture:
  * `telkomsel` is the designed hub: friends with most tracked accounts,
    millions of followers, and only a trickle of engagement per post.
  * Each category has a local leader connected to its members.
  * Within one post the likers, mentioners and retweeters are disjoint and
    never exceed the follower count, so strict-mode MOI stays in [0, 1]
    and raw-mode MOI is exactly 100x strict.
  * Engagers are drawn from outside users (u00001...) plus tracked accounts.

Output is deterministic for a fixed seed.
"""
import json
import pathlib
import random
import sys

CATEGORIES = {
    "main": ["telkomsel", "kartuhalo", "simpati", "kartuas", "tsel_care", "tsel_promo", "tsel_music",
             "tsel_digital"],
    "regional": ["tsel_sumatera", "tsel_jabar", "tsel_jateng", "tsel_jatim", "tsel_balnus", "tsel_kalimantan",
                 "tsel_sulawesi", "tsel_papua", "tsel_jabotabek", "tsel_sumbagsel", "tsel_sumbagut",
                 "tsel_maluku"],
    "group": ["mykartuas", "telkomindonesia", "indihome", "useetv", "telkomcare", "telkomsigma", "metranet",
              "infomedia", "mitratel", "telin"],
    "endorser": ["joe_taslim", "raisa6690", "afgansyah", "isyanasarasvati", "chelseaolivia", "ariel_noah",
                 "dian_sastro", "bcl_official", "vidi_aldiano", "maudy_ayunda", "tulus_m", "rossa_official"],
    "community": ["id_android", "idgamers", "kaskus_hobby", "startup_lokal", "fotografer_id", "runners_id",
                  "ayo_bersepeda", "komunitas_k", "dev_indonesia", "gadget_id", "musisi_indie", "bloggerid"],
    "partner": ["dblwestjavabdg", "dbl_indonesia", "ismaya_live", "java_jazz", "soundrenaline", "jakcloth",
                "ifi_bandung", "inacraft", "gamefest_id", "telkomsel_iot", "popcon_asia"],
}
HUB = "telkomsel"


def handle_of(account_id):
    return "".join(part.capitalize() for part in account_id.split("_"))


def main(out_dir):
    rng = random.Random(2015)
    accounts = [(cid, cat) for cat, ids in CATEGORIES.items() for cid in ids]
    assert len(accounts) == 65

    followers = {}
    for cid, cat in accounts:
        if cid == HUB:
            followers[cid] = 14_000_000
        elif cat == "endorser":
            followers[cid] = rng.randint(400_000, 3_000_000)
        elif cat == "community":
            followers[cid] = rng.randint(20_000, 200_000)
        else:
            followers[cid] = rng.randint(300, 6_000)

    edges = set()

    def add(a, b):
        if a != b:
            edges.add(tuple(sorted((a, b))))

    others = [cid for cid, _ in accounts if cid != HUB]
    for cid in rng.sample(others, 50):
        add(HUB, cid)
    for cat, ids in CATEGORIES.items():
        leader = ids[0] if cat != "main" else ids[1]
        for cid in ids:
            add(leader, cid)
        for _ in range(len(ids) // 3):
            a, b = rng.sample(ids, 2)
            add(a, b)
    for _ in range(12):
        a, b = rng.sample(others, 2)
        add(a, b)

    outside = [f"u{i:05d}" for i in range(1, 4001)]
    tracked = [cid for cid, _ in accounts]
    posts = []
    counter = 0
    for cid, cat in accounts:
        for _ in range(rng.randint(3, 7)):
            counter += 1
            f = followers[cid]
            if cid == HUB:
                total = rng.randint(8, 30)
            elif cat in ("endorser", "community"):
                total = rng.randint(10, 120)
            else:
                total = rng.randint(0, min(f, 400) // 4)
            pool = [u for u in rng.sample(outside + tracked, total + 5) if u != cid][:total]
            n_like = len(pool) // 2
            n_mention = len(pool) // 6
            post = {"post_id": f"p{counter:04d}", "author": cid}
            likers = sorted(pool[:n_like])
            mentioners = sorted(pool[n_like:n_like + n_mention])
            retweeters = sorted(pool[n_like + n_mention:])
            if likers:
                post["likers"] = likers
            if mentioners:
                post["mentioners"] = mentioners
            if retweeters:
                post["retweeters"] = retweeters
            posts.append(post)

    out = pathlib.Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "accounts.csv", "w", newline="\n") as fh:
        fh.write("# taxonomy: " + ",".join(CATEGORIES) + "\n")
        fh.write("id,handle,category,follower_count\n")
        for cid, cat in accounts:
            fh.write(f"{cid},{handle_of(cid)},{cat},{followers[cid]}\n")
    with open(out / "edges.csv", "w", newline="\n") as fh:
        fh.write("src,dst\n")
        for a, b in sorted(edges):
            fh.write(f"{a},{b}\n")
    with open(out / "posts.jsonl", "w", newline="\n") as fh:
        for post in posts:
            fh.write(json.dumps(post, separators=(",", ":")) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else pathlib.Path(__file__).resolve().parent.parent / "data" / "fixture")
