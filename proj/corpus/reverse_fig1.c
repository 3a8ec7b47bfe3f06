struct list {unsigned head; struct list *tail;};
struct list *reverse (struct list *p) {
  //@ With l,
  //@ Require ll(p, l)
  //@ Ensure ll(ret, rev(l))
  struct list *w, *t, *v;
  w = NULL; v = p;
  /*@ Inv exists a b l1 l2, w == a && v == b &&
        l == app(rev(l1), l2) &&
        ll(a, l1) * ll(b, l2) */
  while (v) {
    /*@ Assert exists c x l2', w == a && v == b &&
          l2 == cons(x, l2') &&
          b |-> (x, c) * ll(a, l1) * ll(c, l2') */
    t = v->tail; v->tail = w; w = v; v = t;
    /*@ Assert w == b && v == c &&
          b |-> (x, a) * ll(a, l1) * ll(c, l2') */
  }
  //@ Assert ll(w, rev(l))
  return w;
}
