struct list {unsigned head; struct list *tail;};
struct list *id (struct list *p) {
  //@ With l,
  //@ Ensure ll(ret, l)
  return p;
}
