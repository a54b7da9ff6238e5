//! Reference implementations used only by tests. Nothing here calls into the
//! library's parser, evaluator or minimizer.

#![allow(dead_code)]

/// Evaluates the textual form of an X-form directly on a bit string,
/// without building a tree. `bits[0]` is base `b1`.
pub fn eval_text(text: &str, bits: &[bool]) -> bool {
    let toks: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut pos = 0;
    let v = or_level(&toks, &mut pos, bits);
    assert_eq!(pos, toks.len(), "oracle: trailing input in {text:?}");
    v
}

fn or_level(t: &[char], pos: &mut usize, bits: &[bool]) -> bool {
    let mut v = and_level(t, pos, bits);
    while *pos < t.len() && t[*pos] == '|' {
        *pos += 1;
        let rhs = and_level(t, pos, bits);
        v = v || rhs;
    }
    v
}

fn and_level(t: &[char], pos: &mut usize, bits: &[bool]) -> bool {
    let mut v = unary(t, pos, bits);
    while *pos < t.len() && t[*pos] == '&' {
        *pos += 1;
        let rhs = unary(t, pos, bits);
        v = v && rhs;
    }
    v
}

fn unary(t: &[char], pos: &mut usize, bits: &[bool]) -> bool {
    match t[*pos] {
        '!' => {
            *pos += 1;
            !unary(t, pos, bits)
        }
        '(' => {
            *pos += 1;
            let v = or_level(t, pos, bits);
            assert_eq!(t[*pos], ')');
            *pos += 1;
            v
        }
        '0' => {
            *pos += 1;
            false
        }
        '1' => {
            *pos += 1;
            true
        }
        'b' => {
            *pos += 1;
            let start = *pos;
            while *pos < t.len() && t[*pos].is_ascii_digit() {
                *pos += 1;
            }
            let idx: usize = t[start..*pos].iter().collect::<String>().parse().unwrap();
            bits[idx - 1]
        }
        c => panic!("oracle: unexpected {c:?}"),
    }
}

/// All bit vectors of `width` in lexicographic order.
pub fn all_inputs(width: usize) -> Vec<Vec<bool>> {
    (0..1usize << width)
        .map(|v| (0..width).map(|i| (v >> (width - 1 - i)) & 1 == 1).collect())
        .collect()
}

/// Truth table of a textual X-form as a `0`/`1` string.
pub fn table_text(text: &str, width: usize) -> String {
    all_inputs(width).iter().map(|b| if eval_text(text, b) { '1' } else { '0' }).collect()
}

/// For every function on `width` bits (indexed by its table read as a binary
/// number, first output most significant), the fewest product terms of any
/// DNF realizing it. Breadth-first over "add one product term".
pub fn min_term_counts(width: usize) -> Vec<u8> {
    let len = 1usize << width;
    let inputs = all_inputs(width);
    let mut cubes = Vec::new();
    for code in 0..3usize.pow(width as u32) {
        // digit i: 0 absent, 1 b_i, 2 !b_i
        let digits: Vec<usize> = (0..width).map(|i| code / 3usize.pow(i as u32) % 3).collect();
        let mut table = 0u64;
        for (k, bits) in inputs.iter().enumerate() {
            let on = digits.iter().zip(bits).all(|(&d, &b)| d == 0 || (d == 1) == b);
            if on {
                table |= 1 << (len - 1 - k);
            }
        }
        cubes.push(table);
    }
    let mut dist = vec![u8::MAX; 1usize << len];
    dist[0] = 0;
    let mut frontier = vec![0u64];
    let mut k = 0u8;
    while !frontier.is_empty() {
        k += 1;
        let mut next = Vec::new();
        for &t in &frontier {
            for &c in &cubes {
                let u = (t | c) as usize;
                if dist[u] == u8::MAX {
                    dist[u] = k;
                    next.push(u as u64);
                }
            }
        }
        frontier = next;
    }
    dist
}

/// Number of `|`-separated top-level terms in a printed DNF, 0 for `0`.
pub fn top_level_terms(text: &str) -> usize {
    if text == "0" {
        return 0;
    }
    let mut depth = 0i32;
    let mut terms = 1;
    for c in text.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            '|' if depth == 0 => terms += 1,
            _ => {}
        }
    }
    terms
}
