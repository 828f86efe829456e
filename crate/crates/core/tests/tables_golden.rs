use minkowski::tables::dump_tables;

const GOLDEN: [(usize, &str); 5] = [
    (2, include_str!("../../../docs/tables/n2.txt")),
    (3, include_str!("../../../docs/tables/n3.txt")),
    (4, include_str!("../../../docs/tables/n4.txt")),
    (5, include_str!("../../../docs/tables/n5.txt")),
    (6, include_str!("../../../docs/tables/n6.txt")),
];

#[test]
fn listings_match_the_checked_in_files() {
    for (n, text) in GOLDEN {
        assert!(dump_tables(n).unwrap() == text, "docs/tables/n{n}.txt is stale");
    }
}

#[test]
fn listing_headers_count_their_lines() {
    for (n, text) in GOLDEN {
        let mut sections = 0;
        for block in text.split("# ").filter(|b| !b.is_empty()) {
            let (header, body) = block.split_once('\n').unwrap();
            let count: usize = header.rsplit_once("count=").unwrap().1.parse().unwrap();
            assert_eq!(body.lines().count(), count, "n = {n}: {header}");
            assert!(body
                .lines()
                .all(|l| l.split(' ').take(n).all(|x| x.parse::<i64>().is_ok())));
            sections += 1;
        }
        assert_eq!(sections, 2);
    }
}
