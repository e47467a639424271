// Pattern P17 (return-channel): a channel is returned from a function and
// its send is never paired with a receive.
// Expected: deadlock
package main

func open() chan int {
	ch := make(chan int)
	return ch
}

func main() {
	ch := open()
	ch <- 3
}
