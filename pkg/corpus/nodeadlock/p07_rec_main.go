// Pattern P7 (rec-main): a goroutine that keeps starting itself; once the
// first value is delivered, main exits and the recursion is cut off.
// Expected: no deadlock
package main

import "fmt"

func pump(ch chan int) {
	ch <- 1
	go pump(ch)
}

func main() {
	ch := make(chan int)
	go pump(ch)
	fmt.Println(<-ch)
}
