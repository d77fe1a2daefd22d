//! Integer partitions and the partition function.

/// All partitions of `k` into parts of size at most `max_part`, each listed
/// with parts in descending order. The partitions themselves come out in
/// ascending lexicographic order, so `[1, 1]` precedes `[2]`.
///
/// `k = 0` yields the single empty partition.
pub fn partitions(k: usize, max_part: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    collect(k, max_part.min(k), &mut current, &mut out);
    out.sort();
    out
}

fn collect(rest: usize, max_part: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if rest == 0 {
        out.push(current.clone());
        return;
    }
    for part in (1..=max_part.min(rest)).rev() {
        current.push(part);
        collect(rest - part, part, current, out);
        current.pop();
    }
}

/// `p(k)`, with `p(0) = 1`.
///
/// Computed by Euler's pentagonal number recurrence. Panics on `u128`
/// overflow, which first happens a little above `k = 1800`.
pub fn partition_count(k: usize) -> u128 {
    let mut table: Vec<i128> = vec![0; k + 1];
    table[0] = 1;
    for i in 1..=k {
        let mut sum: i128 = 0;
        for j in 1.. {
            let first = j * (3 * j - 1) / 2;
            if first > i {
                break;
            }
            let second = j * (3 * j + 1) / 2;
            let mut term = table[i - first];
            if second <= i {
                term = term
                    .checked_add(table[i - second])
                    .expect("partition count overflow");
            }
            sum = if j % 2 == 1 {
                sum.checked_add(term)
            } else {
                sum.checked_sub(term)
            }
            .expect("partition count overflow");
        }
        table[i] = sum;
    }
    table[k] as u128
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(partition_count(0), 1);
        assert_eq!(partition_count(4), 5);
        assert_eq!(partition_count(5), 7);
        assert_eq!(partition_count(100), 190_569_292);
    }

    #[test]
    fn recurrence_agrees_with_enumeration() {
        for k in 0..=20 {
            assert_eq!(
                partition_count(k),
                partitions(k, k).len() as u128,
                "k = {k}"
            );
        }
    }

    #[test]
    fn enumeration_of_four() {
        assert_eq!(
            partitions(4, 4),
            vec![
                vec![1, 1, 1, 1],
                vec![2, 1, 1],
                vec![2, 2],
                vec![3, 1],
                vec![4]
            ]
        );
        assert_eq!(partitions(0, 3), vec![Vec::<usize>::new()]);
        assert_eq!(
            partitions(4, 2),
            vec![vec![1, 1, 1, 1], vec![2, 1, 1], vec![2, 2]]
        );
    }
}
