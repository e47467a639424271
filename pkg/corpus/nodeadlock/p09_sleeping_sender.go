// Pattern P9 (SleepingSender): a sender goroutine waits, then sends.
// Expected: no deadlock
package main

import "fmt"
import "time"

func sender(ch chan int) {
	time.Sleep(100)
	ch <- 9
}

func main() {
	ch := make(chan int)
	go sender(ch)
	fmt.Println(<-ch)
}
